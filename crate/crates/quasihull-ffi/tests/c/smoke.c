#include <math.h>
#include <stdio.h>
#include "quasihull.h"

int main(void) {
    double xs[6] = {0.0, 1.0, 2.5, INFINITY, -3.0, -0.7};
    double ys[6] = {0.2, 0.9, 4.0, -6.0, -1.5, -0.1};
    size_t marked[3] = {0, 2, 4};
    QhAdsHull *h = NULL;
    int rc = qh_ads_hull_new(xs, ys, 6, marked, &h);
    if (rc != QH_OK) {
        fprintf(stderr, "hull: %d %s\n", rc, qh_last_error_message());
        return 1;
    }
    double lo = 0.0, hi = 0.0;
    rc = qh_ads_hull_width(h, &lo, &hi);
    qh_ads_hull_free(h);
    if (rc != QH_OK || !(lo > 0.0 && lo <= hi)) {
        return 2;
    }
    double bad[4] = {0.0, 2.0, 1.0, 3.0};
    double y4[4] = {0.0, 1.0, 2.0, 3.0};
    if (qh_ads_hull_new(bad, y4, 4, marked, &h) != QH_ERR_NOT_ACAUSAL) {
        return 3;
    }
    printf("%s %.6f\n", qh_version(), lo);
    return 0;
}
