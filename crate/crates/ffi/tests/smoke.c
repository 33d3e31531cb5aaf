#include <stdio.h>
#include <string.h>
#include "kl.h"

#define CHECK(x) do { if (!(x)) { fprintf(stderr, "failed: %s (%s)\n", #x, kl_last_error()); return 1; } } while (0)

int main(void) {
    KlPerm *v = NULL, *w = NULL, *bad = NULL;
    CHECK(kl_perm_parse("743198652", &v) == KL_STATUS_OK);
    CHECK(kl_perm_parse("975286431", &w) == KL_STATUS_OK);
    CHECK(kl_perm_parse("3x2", &bad) == KL_STATUS_PARSE);
    CHECK(strlen(kl_last_error()) > 0);
    uint64_t m = 0;
    CHECK(kl_multiplicity(v, w, &m) == KL_STATUS_OK);
    CHECK(m == 5);
    CHECK(kl_multiplicity(w, v, &m) == KL_STATUS_NOT_BELOW);
    KlPoly *s = NULL;
    KlPerm *u = NULL;
    CHECK(kl_perm_parse("1432", &u) == KL_STATUS_OK);
    CHECK(kl_double_schubert(u, &s) == KL_STATUS_OK);
    char *text = kl_poly_to_string(s);
    CHECK(text != NULL);
    printf("%s\n", text);
    kl_string_free(text);
    kl_poly_free(s);
    kl_perm_free(u);
    kl_perm_free(v);
    kl_perm_free(w);
    return 0;
}
