#ifndef PHINV_H
#define PHINV_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Outcome of every `phinv_*` call.
typedef enum PhinvStatus {
  PHINV_STATUS_OK = 0,
  PHINV_STATUS_NULL_POINTER = 1,
  PHINV_STATUS_INVALID_ARGUMENT = 2,
  PHINV_STATUS_DOMAIN = 3,
  PHINV_STATUS_CAPACITY = 4,
  PHINV_STATUS_UNSETTLED = 5,
  PHINV_STATUS_INTERNAL = 6,
} PhinvStatus;

// Fermat prime status table.
typedef struct PhinvFermatTable PhinvFermatTable;

// Sorted preimage set with decimal-string elements.
typedef struct PhinvPreimageSet PhinvPreimageSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread. The pointer stays valid
// until the next failing call on the same thread; never free it.
const char *phinv_last_error_message(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from a `phinv_*` output parameter and not be freed twice.
void phinv_string_free(char *s);

// φ(n) as a decimal string.
//
// # Safety
// `n` must be a valid C string and `out` writable.
enum PhinvStatus phinv_totient(const char *n, char **out);

// Writes 1 to `out` when `n` is prime (or a probable prime above 2^64), else 0.
//
// # Safety
// `n` must be a valid C string and `out` writable.
enum PhinvStatus phinv_is_prime(const char *n, int32_t *out);

// The full preimage set φ⁻¹(m).
//
// # Safety
// `m` must be a valid C string and `out` writable.
enum PhinvStatus phinv_inverse_totient(const char *m, struct PhinvPreimageSet **out);

// φ⁻¹(m) by scanning every x ≤ 2m², refusing when 2m² exceeds `budget`.
//
// # Safety
// `m` must be a valid C string and `out` writable.
enum PhinvStatus phinv_brute_force_inverse(const char *m,
                                           uint64_t budget,
                                           struct PhinvPreimageSet **out);

// A(m) = |φ⁻¹(m)|.
//
// # Safety
// `m` must be a valid C string and `out` writable.
enum PhinvStatus phinv_multiplicity(const char *m, uint64_t *out);

// Number of elements in `set`.
//
// # Safety
// `set` must be a live handle and `out` writable.
enum PhinvStatus phinv_preimage_set_len(const struct PhinvPreimageSet *set, size_t *out);

// Borrowed decimal string of the element at `index` (ascending order).
// Valid until the set is freed.
//
// # Safety
// `set` must be a live handle and `out` writable.
enum PhinvStatus phinv_preimage_set_get(const struct PhinvPreimageSet *set,
                                        size_t index,
                                        const char **out);

// Borrowed decimal string of the set's target m.
//
// # Safety
// `set` must be a live handle and `out` writable.
enum PhinvStatus phinv_preimage_set_target(const struct PhinvPreimageSet *set, const char **out);

// Releases a preimage set. Null is ignored.
//
// # Safety
// `set` must come from this library and not be freed twice.
void phinv_preimage_set_free(struct PhinvPreimageSet *set);

// Fermat table with the bundled witnesses when `witness_path` is null;
// otherwise the witnesses are read from that file instead.
//
// # Safety
// `witness_path` must be null or a valid C string; `out` must be writable.
enum PhinvStatus phinv_fermat_table_new(const char *witness_path, struct PhinvFermatTable **out);

// Releases a Fermat table. Null is ignored.
//
// # Safety
// `table` must come from this library and not be freed twice.
void phinv_fermat_table_free(struct PhinvFermatTable *table);

// Largest n such that the status of every F_0..F_n is known.
//
// # Safety
// `table` must be a live handle and `out` writable.
enum PhinvStatus phinv_fermat_table_max_settled_index(const struct PhinvFermatTable *table,
                                                      uint64_t *out);

// A(2^e) as a decimal string.
//
// # Safety
// `table` must be a live handle and `out` writable.
enum PhinvStatus phinv_count_pow2_preimages(const struct PhinvFermatTable *table,
                                            uint64_t e,
                                            char **out);

// φ⁻¹(2^e).
//
// # Safety
// `table` must be a live handle and `out` writable.
enum PhinvStatus phinv_enumerate_pow2_preimages(const struct PhinvFermatTable *table,
                                                uint64_t e,
                                                struct PhinvPreimageSet **out);

// Q_n as a decimal string.
//
// # Safety
// `out` must be writable.
enum PhinvStatus phinv_q_value(size_t n, char **out);

// Preimages of Q_n produced by prime substitution.
//
// # Safety
// `out` must be writable.
enum PhinvStatus phinv_construct_preimages(size_t n, struct PhinvPreimageSet **out);

// Smallest m ≤ limit with exactly k preimages. Writes null to `out` when
// there is none.
//
// # Safety
// `limit` must be a valid C string and `out` writable.
enum PhinvStatus phinv_find_with_multiplicity(size_t k, const char *limit, char **out);

// Distance between `h` and `g` on the side of `c` that contains `h`.
//
// # Safety
// `out` must be writable.
enum PhinvStatus phinv_rho(double h, double g, double c, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PHINV_H */
