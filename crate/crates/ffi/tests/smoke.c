#include <math.h>
#include <stdio.h>
#include "eumirror.h"

#define CHECK(call)                                                        \
    do {                                                                   \
        EumStatus s_ = (call);                                             \
        if (s_ != EUM_STATUS_OK) {                                         \
            fprintf(stderr, "%s -> %d: %s\n", #call, (int)s_,              \
                    eum_last_error() ? eum_last_error() : "");             \
            return 1;                                                      \
        }                                                                  \
    } while (0)

int main(void) {
    EumDataset *ds = NULL;
    CHECK(eum_dataset_new(&ds));
    double xs[3] = {0.0, 1.0, 3.0};
    const char *ids[3] = {"a", "b", "c"};
    for (int i = 0; i < 3; i++) {
        CHECK(eum_dataset_push(ds, ids[i], &xs[i], 1, &xs[i], 1, 1));
    }

    EumDistanceMatrix *dm = NULL;
    CHECK(eum_distance_matrix(ds, 1.0, &dm));
    double d[9];
    CHECK(eum_distance_matrix_values(dm, d, 9));
    if (d[1] != 1.0 || d[2] != 3.0 || d[5] != 2.0) {
        fprintf(stderr, "unexpected distances\n");
        return 1;
    }

    EumEmbedding *emb = NULL;
    CHECK(eum_embed(dm, 0, &emb));
    if (eum_embedding_dim(emb) != 1) {
        fprintf(stderr, "expected c=1\n");
        return 1;
    }

    double pts[8] = {0, 0, 1, 0, 0, 1, 1, 1};
    double vals[4] = {0, 1, 2, 3};
    EumSurface *s = NULL;
    CHECK(eum_surface_new(pts, 4, 2, vals, 1, &s));
    double x[2] = {0.5, 0.5}, y = 0.0;
    CHECK(eum_surface_eval(s, x, 2, &y, 1));
    if (fabs(y - 1.5) > 1e-12) {
        fprintf(stderr, "eval %g\n", y);
        return 1;
    }
    double far[2] = {5.0, 5.0};
    if (eum_surface_eval(s, far, 2, &y, 1) != EUM_STATUS_OUTSIDE_HULL || eum_last_error() == NULL) {
        fprintf(stderr, "outside query not reported\n");
        return 1;
    }

    eum_surface_free(s);
    eum_embedding_free(emb);
    eum_distance_matrix_free(dm);
    eum_dataset_free(ds);
    printf("ok %s\n", eum_version());
    return 0;
}
