//! C ABI for `phinv`.
//!
//! Integers cross the boundary as NUL-terminated decimal strings. Results
//! that are integers come back as heap strings owned by the caller and
//! released with [`phinv_string_free`]. Preimage sets and Fermat tables are
//! opaque handles with their own `*_free` functions. Every function returns
//! a [`PhinvStatus`]; on failure [`phinv_last_error_message`] describes the
//! most recent error on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use phinv::construction::{construct_preimages, q_value};
use phinv::fermat::FermatPrimeTable;
use phinv::inverse::{brute_force_inverse, find_with_multiplicity, inverse_totient};
use phinv::metric::{rho, MetricDomain};
use phinv::{is_prime, totient, Error, Natural, PreimageSet};

/// Outcome of every `phinv_*` call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhinvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    Capacity = 4,
    Unsettled = 5,
    Internal = 6,
}

/// Sorted preimage set with decimal-string elements.
pub struct PhinvPreimageSet {
    target: CString,
    elements: Vec<CString>,
}

/// Fermat prime status table.
pub struct PhinvFermatTable {
    table: FermatPrimeTable,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

struct Fail(PhinvStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Domain(_) | Error::Witness { .. } => PhinvStatus::Domain,
            Error::Capacity { .. } => PhinvStatus::Capacity,
            Error::Unsettled { .. } => PhinvStatus::Unsettled,
            Error::Contract(_) => PhinvStatus::Internal,
        };
        Fail(status, e.to_string())
    }
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> PhinvStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PhinvStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PhinvStatus::Internal
        }
    }
}

fn null(what: &str) -> Fail {
    Fail(PhinvStatus::NullPointer, format!("{what} is null"))
}

unsafe fn natural(s: *const c_char, what: &str) -> Result<Natural, Fail> {
    if s.is_null() {
        return Err(null(what));
    }
    let text = CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Fail(PhinvStatus::InvalidArgument, format!("{what} is not UTF-8")))?;
    text.parse::<Natural>()
        .map_err(|_| Fail(PhinvStatus::InvalidArgument, format!("{what} {text:?} is not a nonnegative decimal integer")))
}

fn c_string(n: &Natural) -> CString {
    CString::new(n.to_str_radix(10)).expect("decimal digits contain no NUL")
}

unsafe fn put<T>(out: *mut T, value: T) {
    *out = value;
}

unsafe fn put_string(out: *mut *mut c_char, n: &Natural) {
    put(out, c_string(n).into_raw());
}

fn boxed_set(set: &PreimageSet) -> *mut PhinvPreimageSet {
    Box::into_raw(Box::new(PhinvPreimageSet {
        target: c_string(set.target()),
        elements: set.elements().iter().map(c_string).collect(),
    }))
}

/// Message for the last failed call on this thread. The pointer stays valid
/// until the next failing call on the same thread; never free it.
#[no_mangle]
pub extern "C" fn phinv_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from a `phinv_*` output parameter and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn phinv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// φ(n) as a decimal string.
///
/// # Safety
/// `n` must be a valid C string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn phinv_totient(n: *const c_char, out: *mut *mut c_char) -> PhinvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let n = natural(n, "n")?;
        put_string(out, &totient(&n)?);
        Ok(())
    })
}

/// Writes 1 to `out` when `n` is prime (or a probable prime above 2^64), else 0.
///
/// # Safety
/// `n` must be a valid C string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn phinv_is_prime(n: *const c_char, out: *mut i32) -> PhinvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let n = natural(n, "n")?;
        put(out, i32::from(is_prime(&n)));
        Ok(())
    })
}

/// The full preimage set φ⁻¹(m).
///
/// # Safety
/// `m` must be a valid C string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn phinv_inverse_totient(m: *const c_char, out: *mut *mut PhinvPreimageSet) -> PhinvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let m = natural(m, "m")?;
        put(out, boxed_set(&inverse_totient(&m)?));
        Ok(())
    })
}

/// φ⁻¹(m) by scanning every x ≤ 2m², refusing when 2m² exceeds `budget`.
///
/// # Safety
/// `m` must be a valid C string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn phinv_brute_force_inverse(
    m: *const c_char,
    budget: u64,
    out: *mut *mut PhinvPreimageSet,
) -> PhinvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let m = natural(m, "m")?;
        put(out, boxed_set(&brute_force_inverse(&m, budget)?));
        Ok(())
    })
}

/// A(m) = |φ⁻¹(m)|.
///
/// # Safety
/// `m` must be a valid C string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn phinv_multiplicity(m: *const c_char, out: *mut u64) -> PhinvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let m = natural(m, "m")?;
        put(out, inverse_totient(&m)?.len() as u64);
        Ok(())
    })
}

/// Number of elements in `set`.
///
/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn phinv_preimage_set_len(set: *const PhinvPreimageSet, out: *mut usize) -> PhinvStatus {
    guard(|| {
        let set = set.as_ref().ok_or_else(|| null("set"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        put(out, set.elements.len());
        Ok(())
    })
}

/// Borrowed decimal string of the element at `index` (ascending order).
/// Valid until the set is freed.
///
/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn phinv_preimage_set_get(
    set: *const PhinvPreimageSet,
    index: usize,
    out: *mut *const c_char,
) -> PhinvStatus {
    guard(|| {
        let set = set.as_ref().ok_or_else(|| null("set"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let item = set.elements.get(index).ok_or_else(|| {
            Fail(PhinvStatus::InvalidArgument, format!("index {index} out of range for {} elements", set.elements.len()))
        })?;
        put(out, item.as_ptr());
        Ok(())
    })
}

/// Borrowed decimal string of the set's target m.
///
/// # Safety
/// `set` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn phinv_preimage_set_target(
    set: *const PhinvPreimageSet,
    out: *mut *const c_char,
) -> PhinvStatus {
    guard(|| {
        let set = set.as_ref().ok_or_else(|| null("set"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        put(out, set.target.as_ptr());
        Ok(())
    })
}

/// Releases a preimage set. Null is ignored.
///
/// # Safety
/// `set` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn phinv_preimage_set_free(set: *mut PhinvPreimageSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Fermat table with the bundled witnesses when `witness_path` is null;
/// otherwise the witnesses are read from that file instead.
///
/// # Safety
/// `witness_path` must be null or a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn phinv_fermat_table_new(
    witness_path: *const c_char,
    out: *mut *mut PhinvFermatTable,
) -> PhinvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let table = if witness_path.is_null() {
            FermatPrimeTable::default()
        } else {
            let path = CStr::from_ptr(witness_path)
                .to_str()
                .map_err(|_| Fail(PhinvStatus::InvalidArgument, "witness path is not UTF-8".into()))?;
            FermatPrimeTable::from_witness_file(path)?
        };
        put(out, Box::into_raw(Box::new(PhinvFermatTable { table })));
        Ok(())
    })
}

/// Releases a Fermat table. Null is ignored.
///
/// # Safety
/// `table` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn phinv_fermat_table_free(table: *mut PhinvFermatTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Largest n such that the status of every F_0..F_n is known.
///
/// # Safety
/// `table` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn phinv_fermat_table_max_settled_index(
    table: *const PhinvFermatTable,
    out: *mut u64,
) -> PhinvStatus {
    guard(|| {
        let table = table.as_ref().ok_or_else(|| null("table"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        put(out, table.table.max_settled_index());
        Ok(())
    })
}

/// A(2^e) as a decimal string.
///
/// # Safety
/// `table` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn phinv_count_pow2_preimages(
    table: *const PhinvFermatTable,
    e: u64,
    out: *mut *mut c_char,
) -> PhinvStatus {
    guard(|| {
        let table = table.as_ref().ok_or_else(|| null("table"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        put_string(out, &table.table.count_pow2_preimages(e)?.count);
        Ok(())
    })
}

/// φ⁻¹(2^e).
///
/// # Safety
/// `table` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn phinv_enumerate_pow2_preimages(
    table: *const PhinvFermatTable,
    e: u64,
    out: *mut *mut PhinvPreimageSet,
) -> PhinvStatus {
    guard(|| {
        let table = table.as_ref().ok_or_else(|| null("table"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        put(out, boxed_set(&table.table.enumerate_pow2_preimages(e)?));
        Ok(())
    })
}

/// Q_n as a decimal string.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn phinv_q_value(n: usize, out: *mut *mut c_char) -> PhinvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if n == 0 {
            return Err(Fail(PhinvStatus::Domain, "n must be at least 1".into()));
        }
        put_string(out, &q_value(n));
        Ok(())
    })
}

/// Preimages of Q_n produced by prime substitution.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn phinv_construct_preimages(n: usize, out: *mut *mut PhinvPreimageSet) -> PhinvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        put(out, boxed_set(&construct_preimages(n)?));
        Ok(())
    })
}

/// Smallest m ≤ limit with exactly k preimages. Writes null to `out` when
/// there is none.
///
/// # Safety
/// `limit` must be a valid C string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn phinv_find_with_multiplicity(
    k: usize,
    limit: *const c_char,
    out: *mut *mut c_char,
) -> PhinvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let limit = natural(limit, "limit")?;
        match find_with_multiplicity(k, &limit)? {
            Some(m) => put_string(out, &m),
            None => put(out, ptr::null_mut()),
        }
        Ok(())
    })
}

/// Distance between `h` and `g` on the side of `c` that contains `h`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn phinv_rho(h: f64, g: f64, c: f64, out: *mut f64) -> PhinvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let domain = MetricDomain::containing(c, h)?;
        put(out, rho(h, g, domain)?);
        Ok(())
    })
}
