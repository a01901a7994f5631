#include <stdio.h>
#include <string.h>
#include "prefixk.h"

int main(void) {
    PrefixkCatalog *u = prefixk_catalog_new_base();
    size_t k = 0;
    if (prefixk_k(u, "0", NULL, &k) != PREFIXK_STATUS_OK || k != 4) return 1;

    char *out = NULL;
    if (prefixk_run(u, "1100", NULL, &out) != PREFIXK_STATUS_OK || strcmp(out, "0") != 0) return 2;
    prefixk_string_free(out);

    if (prefixk_retrace("0000", &out) != PREFIXK_STATUS_NO_MARKER) return 3;
    if (prefixk_last_error() == NULL) return 4;

    size_t lengths[] = {1, 2, 1};
    size_t issued = 0;
    if (prefixk_kc_allocate(lengths, 3, &out, &issued) != PREFIXK_STATUS_OVERWEIGHT || issued != 2) return 5;
    printf("%s\n", out);
    prefixk_string_free(out);

    prefixk_catalog_free(u);
    return 0;
}
