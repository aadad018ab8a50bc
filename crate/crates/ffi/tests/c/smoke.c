#include <stdio.h>
#include <string.h>
#include "permsplit.h"

int main(void) {
    const char *src = "degree 4\ngen (1,2,3,4)\n";
    PermsplitGroup *g = NULL;
    if (permsplit_group_parse(src, &g) != PERMSPLIT_STATUS_OK) return 10;
    PermsplitDecomposition *d = NULL;
    if (permsplit_split(g, 1, &d) != PERMSPLIT_STATUS_OK) return 11;
    if (permsplit_decomposition_len(d) != 4) return 12;
    char *text = NULL;
    if (permsplit_decomposition_text(d, &text) != PERMSPLIT_STATUS_OK) return 13;
    fputs(text, stdout);
    permsplit_string_free(text);
    if (permsplit_decomposition_verify(d) != PERMSPLIT_STATUS_OK) return 14;
    permsplit_decomposition_free(d);
    permsplit_group_free(g);

    if (permsplit_group_parse("degree 2\ngen 3 1", &g) != PERMSPLIT_STATUS_PARSE) return 15;
    if (strstr(permsplit_last_error(), "line 2") == NULL) return 16;
    return 0;
}
