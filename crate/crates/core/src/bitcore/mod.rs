//! Binary strings, exact dyadic weights, prefix codes and Kraft–Chaitin allocation.

mod bits;
mod dyadic;
mod kraft;

pub use bits::{bs, decode_literal, encode_literal, nat_to_string, string_to_nat, BitString, BitsError};
pub use dyadic::DyadicWeight;
pub use kraft::{
    check_prefix_free, kc_allocate, kraft_weight, machine_from_g, GrowthMachine, GrowthTable,
    KcAllocator, KcError, LengthRequest, PrefixViolation, ShiftPolicy,
};
