//! C ABI over `prefixk`.
//!
//! Bit strings cross the boundary as NUL-terminated ASCII `'0'`/`'1'` text;
//! the empty string is the empty word. Strings returned through `out`
//! parameters are owned by the caller and released with
//! [`prefixk_string_free`]. Every fallible call returns a [`PrefixkStatus`]
//! and, on failure, leaves a message for [`prefixk_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use prefixk::bitcore::{kc_allocate, BitString, KcError, LengthRequest};
use prefixk::builder::retrace;
use prefixk::machines::{CatalogFile, UniversalCatalog};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrefixkStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidBits = 3,
    InvalidCatalog = 4,
    /// The program has no output on the catalog.
    Diverges = 5,
    /// `retrace` input without a `1`.
    NoMarker = 6,
    /// A Kraft–Chaitin request would exceed total weight 1.
    Overweight = 7,
    Panic = 8,
}

/// Opaque handle to a validated machine catalog.
pub struct PrefixkCatalog {
    inner: UniversalCatalog,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

type Failure = (PrefixkStatus, String);

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> PrefixkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PrefixkStatus::Ok,
        Ok(Err((status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            PrefixkStatus::Panic
        }
    }
}

fn null(what: &str) -> Failure {
    (PrefixkStatus::NullArgument, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| (PrefixkStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn read_bits(p: *const c_char, what: &str) -> Result<BitString, Failure> {
    read_str(p, what)?
        .parse()
        .map_err(|e| (PrefixkStatus::InvalidBits, format!("{what}: {e}")))
}

unsafe fn read_optional_bits(p: *const c_char, what: &str) -> Result<Option<BitString>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        read_bits(p, what).map(Some)
    }
}

unsafe fn handle<'a>(p: *const PrefixkCatalog) -> Result<&'a UniversalCatalog, Failure> {
    p.as_ref().map(|c| &c.inner).ok_or_else(|| null("catalog"))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = CString::new(s).expect("bit strings have no NUL").into_raw();
    Ok(())
}

/// The message for the most recent failure on this thread, or null. Valid
/// until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn prefixk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn prefixk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The catalog holding only the literal machine.
#[no_mangle]
pub extern "C" fn prefixk_catalog_new_base() -> *mut PrefixkCatalog {
    Box::into_raw(Box::new(PrefixkCatalog {
        inner: UniversalCatalog::base(),
    }))
}

/// Parses and validates a catalog in its TOML form.
///
/// # Safety
/// `toml` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prefixk_catalog_from_toml(
    toml: *const c_char,
    out: *mut *mut PrefixkCatalog,
) -> PrefixkStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(toml, "toml")?;
        let inner = CatalogFile::parse(text)
            .and_then(|f| f.build())
            .map_err(|e| (PrefixkStatus::InvalidCatalog, e.to_string()))?;
        *out = Box::into_raw(Box::new(PrefixkCatalog { inner }));
        Ok(())
    })
}

/// # Safety
/// `catalog` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn prefixk_catalog_free(catalog: *mut PrefixkCatalog) {
    if !catalog.is_null() {
        drop(Box::from_raw(catalog));
    }
}

/// Number of machines, or 0 for a null handle.
///
/// # Safety
/// `catalog` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn prefixk_catalog_len(catalog: *const PrefixkCatalog) -> usize {
    catalog.as_ref().map_or(0, |c| c.inner.len())
}

/// `K(x)`, or `K(x | condition)` when `condition` is not null.
///
/// # Safety
/// String arguments must be valid C strings; `out_k` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prefixk_k(
    catalog: *const PrefixkCatalog,
    x: *const c_char,
    condition: *const c_char,
    out_k: *mut usize,
) -> PrefixkStatus {
    guard(|| {
        let u = handle(catalog)?;
        let x = read_bits(x, "x")?;
        let condition = read_optional_bits(condition, "condition")?;
        if out_k.is_null() {
            return Err(null("out_k"));
        }
        *out_k = u.k_of(&x, condition.as_ref()).k;
        Ok(())
    })
}

/// The canonical shortest unconditional description of `x`.
///
/// # Safety
/// `x` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prefixk_shortest_desc(
    catalog: *const PrefixkCatalog,
    x: *const c_char,
    out: *mut *mut c_char,
) -> PrefixkStatus {
    guard(|| {
        let u = handle(catalog)?;
        let x = read_bits(x, "x")?;
        write_string(out, u.shortest_desc(&x).to_string())
    })
}

/// Runs a full program (header included). Returns `Diverges` when it has no output.
///
/// # Safety
/// String arguments must be valid C strings (`condition` may be null); `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn prefixk_run(
    catalog: *const PrefixkCatalog,
    program: *const c_char,
    condition: *const c_char,
    out: *mut *mut c_char,
) -> PrefixkStatus {
    guard(|| {
        let u = handle(catalog)?;
        let p = read_bits(program, "program")?;
        let condition = read_optional_bits(condition, "condition")?;
        match u.run(&p, condition.as_ref()) {
            Some(x) => write_string(out, x.to_string()),
            None => Err((PrefixkStatus::Diverges, format!("program {p} has no output"))),
        }
    })
}

/// `tau` cut just before its last `1`.
///
/// # Safety
/// `tau` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn prefixk_retrace(tau: *const c_char, out: *mut *mut c_char) -> PrefixkStatus {
    guard(|| {
        let tau = read_bits(tau, "tau")?;
        let rho = retrace(&tau).map_err(|e| (PrefixkStatus::NoMarker, e.to_string()))?;
        write_string(out, rho.to_string())
    })
}

/// Allocates prefix-free codewords of the requested lengths, in order.
///
/// The issued codewords are written newline-separated to `out_codewords`,
/// and `out_issued` receives their count. On `Overweight`, the request at
/// index `*out_issued` was the first one refused and the codewords before it
/// are still written.
///
/// # Safety
/// `lengths` must point to `count` readable values (or be null with `count`
/// 0); both out pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn prefixk_kc_allocate(
    lengths: *const usize,
    count: usize,
    out_codewords: *mut *mut c_char,
    out_issued: *mut usize,
) -> PrefixkStatus {
    guard(|| {
        if lengths.is_null() && count > 0 {
            return Err(null("lengths"));
        }
        if out_issued.is_null() {
            return Err(null("out_issued"));
        }
        let lengths = if count == 0 {
            &[][..]
        } else {
            std::slice::from_raw_parts(lengths, count)
        };
        let requests: Vec<LengthRequest> = lengths
            .iter()
            .enumerate()
            .map(|(index, &requested_length)| LengthRequest {
                index,
                requested_length,
            })
            .collect();
        let join = |words: &[BitString]| words.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n");
        match kc_allocate(&requests) {
            Ok(words) => {
                write_string(out_codewords, join(&words))?;
                *out_issued = words.len();
                Ok(())
            }
            Err(e) => {
                if let KcError::Overweight { index, allocated, .. } = &e {
                    write_string(out_codewords, join(allocated))?;
                    *out_issued = *index;
                }
                Err((PrefixkStatus::Overweight, e.to_string()))
            }
        }
    })
}
