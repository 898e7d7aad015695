use dealab_ffi::*;
use std::ffi::CStr;
use std::ptr;

#[test]
fn status_strings_are_static_c_strings() {
    let s = unsafe { CStr::from_ptr(dealab_status_str(DealabStatus::SizeMismatch)) };
    assert_eq!(s.to_str().unwrap(), "size mismatch");
}

#[test]
fn scalar_entry_points() {
    assert_eq!(dealab_g_mul(1000, 200), dealab::dea::g_mul(1000, 200));
    let mut y = 0u32;
    assert_eq!(unsafe { dealab_dea_eval(3, 5, 0, 8, &mut y) }, DealabStatus::Ok);
    assert_eq!(y, 6);
    assert_eq!(unsafe { dealab_dea_eval(300, 5, 0, 8, &mut y) }, DealabStatus::InvalidArgument);
    assert_eq!(unsafe { dealab_dea_eval(3, 5, 0, 8, ptr::null_mut()) }, DealabStatus::NullPointer);
}

#[test]
fn bit_plane_over_chosen_queries() {
    let k = 0x5Bu32;
    let (a, b) = ([0x00u32, 0xAA], [0xAAu32, 0x55]);
    let y: Vec<u32> = a.iter().zip(&b).map(|(&a, &b)| ((a + k) & 0xff) ^ ((b + k) & 0xff)).collect();
    let (mut value, mut mask) = (0, 0);
    let st = unsafe { dealab_bit_plane_solve(a.as_ptr(), b.as_ptr(), y.as_ptr(), 2, 8, &mut value, &mut mask) };
    assert_eq!(st, DealabStatus::Ok);
    assert_eq!((value, mask), (k, 0x7f));
}

#[test]
fn key_round_trip_and_size_checks() {
    unsafe {
        let mut key = ptr::null_mut();
        assert_eq!(dealab_key_new(DealabCipher::Yang, 0, 2, 2, &mut key), DealabStatus::Ok);
        assert_eq!(dealab_key_pixels(key), 4);
        let mut ks = [0u8; 5];
        assert_eq!(dealab_key_keystream(key, ks.as_mut_ptr(), 5), DealabStatus::Ok);
        assert_eq!(ks, [175, 205, 29, 123, 57]);
        let plain = [1u8, 2, 3, 4];
        let mut buf = plain;
        assert_eq!(dealab_encrypt(key, buf.as_ptr(), buf.as_mut_ptr(), 4), DealabStatus::Ok);
        assert_eq!(buf, [114, 87, 26, 229]);
        assert_eq!(dealab_decrypt(key, buf.as_ptr(), buf.as_mut_ptr(), 4), DealabStatus::Ok);
        assert_eq!(buf, plain);
        assert_eq!(dealab_encrypt(key, buf.as_ptr(), buf.as_mut_ptr(), 3), DealabStatus::SizeMismatch);
        dealab_key_free(key);
        dealab_key_free(ptr::null_mut());
        assert_eq!(dealab_key_new(DealabCipher::Yang, 0, 0, 2, &mut key), DealabStatus::SizeMismatch);
    }
}

#[test]
fn chosen_plaintext_attack_through_handles() {
    unsafe {
        for cipher in [DealabCipher::Parvin, DealabCipher::Norouzi, DealabCipher::Yang] {
            let mut oracle = ptr::null_mut();
            assert_eq!(dealab_oracle_new(cipher, 3, 8, 8, DealabModel::ChosenPlaintext, &mut oracle), DealabStatus::Ok);
            let mut recovered = ptr::null_mut();
            assert_eq!(dealab_cp_attack(oracle, 1, &mut recovered), DealabStatus::Ok, "{cipher:?}");
            assert!(dealab_oracle_queries(oracle) > 0);

            let mut truth = ptr::null_mut();
            assert_eq!(dealab_key_new(cipher, 3, 8, 8, &mut truth), DealabStatus::Ok);
            let plain: Vec<u8> = (0..64u8).map(|x| x.wrapping_mul(37)).collect();
            let mut ct = vec![0u8; 64];
            let mut back = vec![0u8; 64];
            assert_eq!(dealab_encrypt(truth, plain.as_ptr(), ct.as_mut_ptr(), 64), DealabStatus::Ok);
            assert_eq!(dealab_decrypt(recovered, ct.as_ptr(), back.as_mut_ptr(), 64), DealabStatus::Ok);
            assert_eq!(back, plain, "{cipher:?}");
            dealab_key_free(truth);
            dealab_key_free(recovered);
            dealab_oracle_free(oracle);
        }
    }
}

#[test]
fn known_plaintext_oracle_refuses_chosen_attack() {
    unsafe {
        let mut oracle = ptr::null_mut();
        assert_eq!(dealab_oracle_new(DealabCipher::Norouzi, 3, 4, 4, DealabModel::KnownPlaintext, &mut oracle), DealabStatus::Ok);
        let mut out = ptr::null_mut();
        assert_eq!(dealab_cp_attack(oracle, 0, &mut out), DealabStatus::ModelViolation);
        assert!(out.is_null());
        dealab_oracle_free(oracle);
    }
}

#[test]
fn header_declares_exports() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/dealab.h")).unwrap();
    for name in ["dealab_key_new", "dealab_encrypt", "dealab_cp_attack", "DEALAB_STATUS_OK", "typedef struct DealabOracle"] {
        assert!(header.contains(name), "{name}");
    }
}
