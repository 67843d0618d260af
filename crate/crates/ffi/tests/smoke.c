#include <stdio.h>
#include <string.h>

#include "catclust.h"

static const uint32_t CODES[] = {
    0, 0, 0,
    0, 0, 0,
    0, 0, 1,
    1, 1, 1,
    1, 1, 1,
    1, 1, 0,
};

int main(void) {
    CcDataset *ds = NULL;
    if (cc_dataset_from_codes(CODES, 6, 3, &ds) != CC_STATUS_OK) {
        return 1;
    }
    CcMatrix *mat = NULL;
    if (cc_matrix_compute(ds, CC_MEASURE_LIN, &mat) != CC_STATUS_OK || cc_matrix_order(mat) != 6) {
        return 2;
    }
    CcClustering *res = NULL;
    if (cc_cluster(ds, CC_ALGORITHM_KSCC, 2, 10, 100, 1, &res) != CC_STATUS_OK) {
        return 3;
    }
    size_t labels[6];
    if (cc_clustering_labels(res, labels, 6) != CC_STATUS_OK) {
        return 4;
    }
    if (labels[0] != labels[1] || labels[0] == labels[3] || labels[3] != labels[4]) {
        return 5;
    }
    double s = 0.0;
    if (cc_average_silhouette(mat, labels, 6, 2, &s) != CC_STATUS_OK || s <= 0.0) {
        return 6;
    }
    CcClustering *bad = NULL;
    if (cc_cluster(ds, CC_ALGORITHM_KSCC, 1, 10, 100, 1, &bad) != CC_STATUS_CONFIG || bad != NULL) {
        return 7;
    }
    const char *msg = cc_last_error_message();
    if (msg == NULL || strstr(msg, "k must be at least 2") == NULL) {
        return 8;
    }
    printf("silhouette=%.6f\n", s);
    cc_clustering_free(res);
    cc_matrix_free(mat);
    cc_dataset_free(ds);
    return 0;
}
