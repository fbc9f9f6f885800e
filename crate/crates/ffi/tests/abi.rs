use std::ffi::{c_char, CStr, CString};
use std::ptr;

use phinv_ffi::*;

fn owned(s: *mut c_char) -> String {
    let text = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { phinv_string_free(s) };
    text
}

fn elements(set: *mut PhinvPreimageSet) -> Vec<String> {
    let mut len = 0usize;
    assert_eq!(unsafe { phinv_preimage_set_len(set, &mut len) }, PhinvStatus::Ok);
    (0..len)
        .map(|i| {
            let mut p: *const c_char = ptr::null();
            assert_eq!(unsafe { phinv_preimage_set_get(set, i, &mut p) }, PhinvStatus::Ok);
            unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned()
        })
        .collect()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(phinv_last_error_message()) }.to_str().unwrap().to_owned()
}

#[test]
fn inverse_of_twelve() {
    let m = CString::new("12").unwrap();
    let mut set = ptr::null_mut();
    assert_eq!(unsafe { phinv_inverse_totient(m.as_ptr(), &mut set) }, PhinvStatus::Ok);
    assert_eq!(elements(set), ["13", "21", "26", "28", "36", "42"]);
    let mut target: *const c_char = ptr::null();
    assert_eq!(unsafe { phinv_preimage_set_target(set, &mut target) }, PhinvStatus::Ok);
    assert_eq!(unsafe { CStr::from_ptr(target) }.to_str().unwrap(), "12");
    let mut p: *const c_char = ptr::null();
    assert_eq!(unsafe { phinv_preimage_set_get(set, 6, &mut p) }, PhinvStatus::InvalidArgument);
    unsafe { phinv_preimage_set_free(set) };
}

#[test]
fn brute_force_agrees_and_respects_budget() {
    let m = CString::new("24").unwrap();
    let mut fast = ptr::null_mut();
    let mut slow = ptr::null_mut();
    assert_eq!(unsafe { phinv_inverse_totient(m.as_ptr(), &mut fast) }, PhinvStatus::Ok);
    assert_eq!(unsafe { phinv_brute_force_inverse(m.as_ptr(), 10_000, &mut slow) }, PhinvStatus::Ok);
    assert_eq!(elements(fast), elements(slow));
    unsafe {
        phinv_preimage_set_free(fast);
        phinv_preimage_set_free(slow);
    }
    let mut set = ptr::null_mut();
    assert_eq!(unsafe { phinv_brute_force_inverse(m.as_ptr(), 100, &mut set) }, PhinvStatus::Capacity);
    assert!(set.is_null());
    assert!(last_error().contains("capacity"));
}

#[test]
fn scalar_functions() {
    let n = CString::new("36").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { phinv_totient(n.as_ptr(), &mut s) }, PhinvStatus::Ok);
    assert_eq!(owned(s), "12");

    let p = CString::new("2305843009213693951").unwrap();
    let mut flag = -1;
    assert_eq!(unsafe { phinv_is_prime(p.as_ptr(), &mut flag) }, PhinvStatus::Ok);
    assert_eq!(flag, 1);

    let two = CString::new("2").unwrap();
    let mut count = 0u64;
    assert_eq!(unsafe { phinv_multiplicity(two.as_ptr(), &mut count) }, PhinvStatus::Ok);
    assert_eq!(count, 3);

    assert_eq!(unsafe { phinv_q_value(3, &mut s) }, PhinvStatus::Ok);
    assert_eq!(owned(s), "48");

    let mut r = 0.0;
    assert_eq!(unsafe { phinv_rho(2.0, 3.0, 1.0, &mut r) }, PhinvStatus::Ok);
    assert!((r - (4.0f64 / 3.0).ln().abs()).abs() < 1e-12);
    assert_eq!(unsafe { phinv_rho(2.0, 0.5, 1.0, &mut r) }, PhinvStatus::Domain);
}

#[test]
fn search() {
    let limit = CString::new("1000").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { phinv_find_with_multiplicity(3, limit.as_ptr(), &mut s) }, PhinvStatus::Ok);
    assert_eq!(owned(s), "2");
    assert_eq!(unsafe { phinv_find_with_multiplicity(4, limit.as_ptr(), &mut s) }, PhinvStatus::Ok);
    assert_eq!(owned(s), "4");
    let small = CString::new("1").unwrap();
    assert_eq!(unsafe { phinv_find_with_multiplicity(4, small.as_ptr(), &mut s) }, PhinvStatus::Ok);
    assert!(s.is_null());
}

#[test]
fn fermat_table_and_powers_of_two() {
    let mut table = ptr::null_mut();
    assert_eq!(unsafe { phinv_fermat_table_new(ptr::null(), &mut table) }, PhinvStatus::Ok);
    let mut settled = 0u64;
    assert_eq!(unsafe { phinv_fermat_table_max_settled_index(table, &mut settled) }, PhinvStatus::Ok);
    assert!(settled >= 5);

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { phinv_count_pow2_preimages(table, 40, &mut s) }, PhinvStatus::Ok);
    assert_eq!(owned(s), "32");

    let mut set = ptr::null_mut();
    assert_eq!(unsafe { phinv_enumerate_pow2_preimages(table, 2, &mut set) }, PhinvStatus::Ok);
    assert_eq!(elements(set), ["5", "8", "10", "12"]);
    unsafe {
        phinv_preimage_set_free(set);
        phinv_fermat_table_free(table);
    }
}

#[test]
fn construction() {
    let mut set = ptr::null_mut();
    assert_eq!(unsafe { phinv_construct_preimages(3, &mut set) }, PhinvStatus::Ok);
    let xs = elements(set);
    assert!(!xs.is_empty());
    unsafe { phinv_preimage_set_free(set) };
    assert_eq!(unsafe { phinv_construct_preimages(0, &mut set) }, PhinvStatus::Domain);
}

#[test]
fn bad_arguments() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { phinv_totient(ptr::null(), &mut s) }, PhinvStatus::NullPointer);
    let junk = CString::new("12a").unwrap();
    assert_eq!(unsafe { phinv_totient(junk.as_ptr(), &mut s) }, PhinvStatus::InvalidArgument);
    assert!(last_error().contains("12a"));
    let zero = CString::new("0").unwrap();
    assert_eq!(unsafe { phinv_totient(zero.as_ptr(), &mut s) }, PhinvStatus::Domain);
    unsafe {
        phinv_string_free(ptr::null_mut());
        phinv_preimage_set_free(ptr::null_mut());
        phinv_fermat_table_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/phinv.h")).unwrap();
    let source = include_str!("../src/lib.rs");
    let exports: Vec<&str> = source
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 20, "{exports:?}");
    for name in exports {
        assert!(header.contains(name), "{name} missing from header");
    }
    assert!(header.contains("typedef struct PhinvPreimageSet PhinvPreimageSet"));
    assert!(header.contains("PHINV_STATUS_CAPACITY"));
}
