#ifndef PERMSPLIT_H
#define PERMSPLIT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes; the nonzero library codes match the CLI exit codes.
typedef enum PermsplitStatus {
  PERMSPLIT_STATUS_OK = 0,
  PERMSPLIT_STATUS_PARSE = 1,
  PERMSPLIT_STATUS_INTRANSITIVE = 2,
  PERMSPLIT_STATUS_RESOURCE_LIMIT = 3,
  PERMSPLIT_STATUS_INVARIANT = 4,
  PERMSPLIT_STATUS_CHECK_FAILED = 5,
  PERMSPLIT_STATUS_NULL_POINTER = 6,
  PERMSPLIT_STATUS_INVALID_ARGUMENT = 7,
  PERMSPLIT_STATUS_PANIC = 8,
} PermsplitStatus;

// Result of a split: the verified projector family plus its basis.
typedef struct PermsplitDecomposition PermsplitDecomposition;

// Parsed generator set.
typedef struct PermsplitGroup PermsplitGroup;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer
// stays valid until the next call into the library on the same thread.
const char *permsplit_last_error(void);

// Library version as a static NUL-terminated string.
const char *permsplit_version(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be freed twice.
void permsplit_string_free(char *s);

// Parses a generator file (`degree N` / `gen ...` lines).
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum PermsplitStatus permsplit_group_parse(const char *text, struct PermsplitGroup **out);

// # Safety
// `group` must come from [`permsplit_group_parse`] or be null.
void permsplit_group_free(struct PermsplitGroup *group);

// Number of points acted on, or 0 for a null handle.
//
// # Safety
// `group` must be a live handle or null.
size_t permsplit_group_degree(const struct PermsplitGroup *group);

// JSON analysis report: rank, suborbit lengths, transpose pairing and,
// when `with_tensor` is nonzero, the structure constants.
//
// # Safety
// `group` must be a live handle; `out` must be writable. The string is
// released with [`permsplit_string_free`].
enum PermsplitStatus permsplit_analyze_json(const struct PermsplitGroup *group,
                                            int32_t with_tensor,
                                            char **out);

// Computes and verifies the full decomposition. `seed` drives the slicing.
//
// # Safety
// `group` must be a live handle; `out` must be writable.
enum PermsplitStatus permsplit_split(const struct PermsplitGroup *group,
                                     uint64_t seed,
                                     struct PermsplitDecomposition **out);

// # Safety
// `dec` must come from [`permsplit_split`] or be null.
void permsplit_decomposition_free(struct PermsplitDecomposition *dec);

// Number of projectors, or 0 for a null handle.
//
// # Safety
// `dec` must be a live handle or null.
size_t permsplit_decomposition_len(const struct PermsplitDecomposition *dec);

// Rank of the centralizer algebra, or 0 for a null handle.
//
// # Safety
// `dec` must be a live handle or null.
size_t permsplit_decomposition_rank(const struct PermsplitDecomposition *dec);

// Dimension of projector `index` (0-based).
//
// # Safety
// `dec` must be a live handle; `out` must be writable.
enum PermsplitStatus permsplit_decomposition_dimension(const struct PermsplitDecomposition *dec,
                                                       size_t index,
                                                       size_t *out);

// Text report of the decomposition.
//
// # Safety
// `dec` must be a live handle; `out` must be writable.
enum PermsplitStatus permsplit_decomposition_text(const struct PermsplitDecomposition *dec,
                                                  char **out);

// JSON report of the decomposition.
//
// # Safety
// `dec` must be a live handle; `out` must be writable.
enum PermsplitStatus permsplit_decomposition_json(const struct PermsplitDecomposition *dec,
                                                  char **out);

// Re-runs the algebraic checks; `PERMSPLIT_STATUS_CHECK_FAILED` names the
// first failing check in the last-error message.
//
// # Safety
// `dec` must be a live handle.
enum PermsplitStatus permsplit_decomposition_verify(const struct PermsplitDecomposition *dec);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PERMSPLIT_H */
