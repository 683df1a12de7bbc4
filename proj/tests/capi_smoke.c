/* Compiles the public header as C and exercises a few calls. */
#include <stdio.h>
#include <string.h>

#include "cellflow/cellflow.h"

int main(void) {
    cf_params p = {0.05, 0.05, 0.0};
    double k = 0.0;
    cf_family* fam = NULL;
    cf_rotation r;
    if (cf_k_constant(p, &k) != CF_OK || k > -0.0025 || k < -0.0026) {
        fprintf(stderr, "k_constant failed: %s\n", cf_last_error());
        return 1;
    }
    if (cf_family_boyd(0.25, 4.0 / 3.0, &fam) != CF_OK) return 1;
    if (cf_family_rotation(fam, 0.1, NULL, &r) != CF_OK || !r.is_rational || r.p != 0 || r.q != 1) {
        cf_family_free(fam);
        return 1;
    }
    cf_family_free(fam);
    if (cf_family_boyd(0.25, 2.0, &fam) != CF_DOMAIN_ERROR || strlen(cf_last_error()) == 0) return 1;
    printf("cellflow %s\n", cf_version());
    return 0;
}
