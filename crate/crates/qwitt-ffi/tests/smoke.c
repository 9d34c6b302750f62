#include <stdio.h>
#include <string.h>

#include "qwitt.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "failed: %s (%s)\n", #cond, qwitt_last_error()); \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    QwittRing *ring = NULL;
    QwittVector *x = NULL, *prod = NULL;
    char *text = NULL;

    CHECK(qwitt_ring_parse("zmod:4", &ring) == QwittStatus_Ok);
    CHECK(qwitt_vector_parse(ring, 4, "(1,1,0)", &x) == QwittStatus_Ok);
    CHECK(qwitt_vector_mul(x, x, &prod) == QwittStatus_Ok);
    CHECK(qwitt_vector_to_string(prod, &text) == QwittStatus_Ok);
    printf("%s\n", text);
    qwitt_string_free(text);

    CHECK(qwitt_vector_frobenius(x, 3, &prod) == QwittStatus_Math);
    CHECK(strlen(qwitt_last_error()) > 0);

    qwitt_vector_free(x);
    qwitt_ring_free(ring);
    return 0;
}
