#include <stdio.h>
#include <string.h>

#include "thompson.h"

#define CHECK(cond)                                                      \
  do {                                                                   \
    if (!(cond)) {                                                       \
      fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__, #cond,     \
              thompson_last_error());                                    \
      return 1;                                                          \
    }                                                                    \
  } while (0)

int main(void) {
  ThompsonMap *f = NULL, *inv = NULL, *id = NULL;
  char *s = NULL;
  bool flag = false;

  CHECK(thompson_map_from_word("x1 x0^-1 x1^-1 x0", &f) == THOMPSON_STATUS_OK);
  CHECK(thompson_map_support(f, &s) == THOMPSON_STATUS_OK);
  CHECK(strcmp(s, "(1/2, 7/8)") == 0);
  thompson_string_free(s);

  CHECK(thompson_map_inverse(f, &inv) == THOMPSON_STATUS_OK);
  CHECK(thompson_map_compose(f, inv, &id) == THOMPSON_STATUS_OK);
  CHECK(thompson_map_is_identity(id, &flag) == THOMPSON_STATUS_OK && flag);

  ThompsonWreath *w = NULL;
  char *t = NULL;
  CHECK(thompson_wreath_decompose(f, &w) == THOMPSON_STATUS_OK);
  CHECK(thompson_wreath_to_string(w, &t) == THOMPSON_STATUS_OK);
  CHECK(strcmp(t, "shift=0; coeffs={0:1}") == 0);
  thompson_string_free(t);
  thompson_wreath_free(w);
  w = NULL;

  ThompsonMap *x1 = NULL;
  CHECK(thompson_map_from_word("x1", &x1) == THOMPSON_STATUS_OK);
  CHECK(thompson_wreath_decompose(x1, &w) == THOMPSON_STATUS_NOT_IN_WREATH_SUBGROUP);
  thompson_map_free(x1);
  CHECK(strlen(thompson_last_error()) > 0);
  CHECK(thompson_map_from_word("x^2", &f) == THOMPSON_STATUS_PARSE);

  CHECK(thompson_verify("relations", 20, &flag, NULL) == THOMPSON_STATUS_OK && flag);

  thompson_map_free(f);
  thompson_map_free(inv);
  thompson_map_free(id);
  puts("smoke ok");
  return 0;
}
