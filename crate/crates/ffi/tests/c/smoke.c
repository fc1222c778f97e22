#include <math.h>
#include <stdio.h>
#include "boxlab.h"

#define CHECK(call)                                                     \
  do {                                                                  \
    BoxlabStatus s_ = (call);                                           \
    if (s_ != BOXLAB_STATUS_OK) {                                       \
      fprintf(stderr, "%s failed: %d %s\n", #call, s_, boxlab_last_error()); \
      return 1;                                                         \
    }                                                                   \
  } while (0)

int main(void) {
  BoxlabBox3 *g = NULL;
  BoxlabBox2 *q = NULL;
  BoxlabReport *r = NULL;
  double v = 0.0;
  bool in = true, found = false;
  BoxlabClass finest;

  CHECK(boxlab_ghz(&g));
  CHECK(boxlab_wire(g, BOXLAB_PROTOCOL_TWO_TO_THREE, &q));
  CHECK(boxlab_chsh(q, &v));
  if (fabs(v - 3.0 / sqrt(2.0)) > 1e-9) return 2;

  CHECK(boxlab_membership(g, BOXLAB_CLASS_ATOBL_RIGHT, 1e-9, &in));
  if (in) return 3;

  CHECK(boxlab_classify(g, 1e-9, &r));
  CHECK(boxlab_report_finest_class(r, &found, &finest));
  if (!found || finest != BOXLAB_CLASS_ATOBL_LEFT) return 4;

  double bad[64] = {0};
  if (boxlab_box3_new(bad, 1e-9, &g) != BOXLAB_STATUS_INVALID_BOX) return 5;

  boxlab_report_free(r);
  boxlab_box2_free(q);
  boxlab_box3_free(g);
  printf("ok %.10f\n", v);
  return 0;
}
