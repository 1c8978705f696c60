#![no_main]

use libfuzzer_sys::fuzz_target;
use num_bigint::BigInt;
use selmer3::forms::{act, canonicalize, BinaryCubicForm, UnimodularMatrix};

// Coefficients as four little-endian i16, then a shear and a flag for the
// swap; canonicalize must be constant on the class.
fuzz_target!(|data: &[u8]| {
    if data.len() < 11 {
        return;
    }
    let c = |i: usize| BigInt::from(i16::from_le_bytes([data[2 * i], data[2 * i + 1]]));
    let Ok(form) = BinaryCubicForm::new(c(0), c(1), c(2), c(3)) else { return };
    let Ok(canon) = canonicalize(&form) else { return };
    assert_eq!(canon.discriminant(), form.discriminant());
    assert_eq!(canonicalize(&canon).unwrap(), canon);
    let k = i16::from_le_bytes([data[8], data[9]]) as i64;
    let m = if data[10] & 1 == 1 {
        UnimodularMatrix::from_i64(k, -1, 1, 0).unwrap()
    } else {
        UnimodularMatrix::from_i64(1, k, 0, 1).unwrap()
    };
    assert_eq!(canonicalize(&act(&m, &form)).unwrap(), canon);
});
