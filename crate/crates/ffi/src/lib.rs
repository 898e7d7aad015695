//! C ABI for dealab. Handles are opaque; every fallible call returns a [`DealabStatus`].

use dealab::attacks::{cp_attack_norouzi, cp_attack_parvin_full, cp_attack_yang_full, AttackModel, LocalOracle, Oracle};
use dealab::ciphers::{decrypt, encrypt};
use dealab::dea::{dea_eval, g_mul, Triple, Word};
use dealab::image::Image;
use dealab::keysched::{key_schedule, CipherKind, KeyMaterial, Seed};
use dealab::solvers::{bit_plane_solve, TripleSet};
use dealab::Error;
use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DealabStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    SizeMismatch = 3,
    ModelViolation = 4,
    Inconsistent = 5,
    Internal = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DealabCipher {
    Parvin = 0,
    Norouzi = 1,
    Yang = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DealabModel {
    KnownPlaintext = 0,
    ChosenPlaintext = 1,
}

/// Opaque key material.
pub struct DealabKey(KeyMaterial);

/// Opaque encryption oracle holding a hidden key.
pub struct DealabOracle(LocalOracle);

impl From<DealabCipher> for CipherKind {
    fn from(c: DealabCipher) -> Self {
        match c {
            DealabCipher::Parvin => CipherKind::Parvin,
            DealabCipher::Norouzi => CipherKind::Norouzi,
            DealabCipher::Yang => CipherKind::Yang,
        }
    }
}

fn status_of(e: &Error) -> DealabStatus {
    match e {
        Error::SizeMismatch { .. } | Error::WidthMismatch { .. } | Error::InvalidDimensions { .. } => {
            DealabStatus::SizeMismatch
        }
        Error::ModelViolation(_) | Error::OracleRefused(_) => DealabStatus::ModelViolation,
        Error::Inconsistent => DealabStatus::Inconsistent,
        Error::Io(_) | Error::Protocol(_) => DealabStatus::Internal,
        _ => DealabStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), DealabStatus>) -> DealabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => DealabStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => DealabStatus::Internal,
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, DealabStatus>;
}

impl<T> OrStatus<T> for dealab::Result<T> {
    fn or_status(self) -> Result<T, DealabStatus> {
        self.map_err(|e| status_of(&e))
    }
}

fn non_null<T>(p: *const T) -> Result<(), DealabStatus> {
    if p.is_null() {
        Err(DealabStatus::NullPointer)
    } else {
        Ok(())
    }
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn dealab_status_str(status: DealabStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        DealabStatus::Ok => b"ok\0",
        DealabStatus::NullPointer => b"null pointer\0",
        DealabStatus::InvalidArgument => b"invalid argument\0",
        DealabStatus::SizeMismatch => b"size mismatch\0",
        DealabStatus::ModelViolation => b"attack model violation\0",
        DealabStatus::Inconsistent => b"inconsistent data\0",
        DealabStatus::Internal => b"internal error\0",
    };
    s.as_ptr().cast()
}

#[no_mangle]
pub extern "C" fn dealab_g_mul(sum: u64, k: u8) -> u8 {
    g_mul(sum, k)
}

/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn dealab_dea_eval(alpha: u32, beta: u32, k: u32, bits: u32, out: *mut u32) -> DealabStatus {
    guard(|| {
        non_null(out)?;
        let w = |v| Word::new(v, bits).or_status();
        let y = dea_eval(w(alpha)?, w(beta)?, w(k)?).or_status()?;
        *out = y.value();
        Ok(())
    })
}

/// Bit-plane solve over `count` triples given as parallel arrays.
///
/// # Safety
/// `alphas`, `betas`, `ys` must each hold `count` values; `value` and `mask` must be writable.
#[no_mangle]
pub unsafe extern "C" fn dealab_bit_plane_solve(
    alphas: *const u32,
    betas: *const u32,
    ys: *const u32,
    count: usize,
    bits: u32,
    value: *mut u32,
    mask: *mut u32,
) -> DealabStatus {
    guard(|| {
        non_null(value)?;
        non_null(mask)?;
        let mut set = TripleSet::new(bits).or_status()?;
        if count > 0 {
            non_null(alphas)?;
            non_null(betas)?;
            non_null(ys)?;
            let (a, b, y) = (
                std::slice::from_raw_parts(alphas, count),
                std::slice::from_raw_parts(betas, count),
                std::slice::from_raw_parts(ys, count),
            );
            for i in 0..count {
                let w = |v| Word::new(v, bits).or_status();
                set.push(Triple::new(w(a[i])?, w(b[i])?, w(y[i])?).or_status()?).or_status()?;
            }
        }
        let est = bit_plane_solve(&set);
        *value = est.value.value();
        *mask = est.determined;
        Ok(())
    })
}

/// Derives key material from a seed. Free with [`dealab_key_free`].
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn dealab_key_new(
    cipher: DealabCipher,
    seed: u64,
    height: usize,
    width: usize,
    out: *mut *mut DealabKey,
) -> DealabStatus {
    guard(|| {
        non_null(out)?;
        let km = key_schedule(Seed::new(seed, cipher.into()), height, width).or_status()?;
        *out = Box::into_raw(Box::new(DealabKey(km)));
        Ok(())
    })
}

/// # Safety
/// `key` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn dealab_key_free(key: *mut DealabKey) {
    if !key.is_null() {
        drop(Box::from_raw(key));
    }
}

/// Pixel count `H * W` of the key, or 0 for null.
///
/// # Safety
/// `key` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dealab_key_pixels(key: *const DealabKey) -> usize {
    key.as_ref().map_or(0, |k| k.0.len())
}

/// Copies the `L + 1` keystream bytes into `out`.
///
/// # Safety
/// `key` must be a live handle and `out` must hold `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn dealab_key_keystream(key: *const DealabKey, out: *mut u8, len: usize) -> DealabStatus {
    guard(|| {
        non_null(key)?;
        non_null(out)?;
        let ks = &(*key).0.keystream;
        if len != ks.len() {
            return Err(DealabStatus::SizeMismatch);
        }
        std::slice::from_raw_parts_mut(out, len).copy_from_slice(ks);
        Ok(())
    })
}

unsafe fn transform(
    key: *const DealabKey,
    input: *const u8,
    output: *mut u8,
    len: usize,
    f: fn(&Image, &KeyMaterial) -> dealab::Result<Image>,
) -> DealabStatus {
    guard(|| {
        non_null(key)?;
        non_null(input)?;
        non_null(output)?;
        let km = &(*key).0;
        if len != km.len() {
            return Err(DealabStatus::SizeMismatch);
        }
        let img = Image::new(km.height, km.width, std::slice::from_raw_parts(input, len).to_vec()).or_status()?;
        let res = f(&img, km).or_status()?;
        std::slice::from_raw_parts_mut(output, len).copy_from_slice(res.pixels());
        Ok(())
    })
}

/// Encrypts `len = H * W` row-major pixels. `input` and `output` may alias.
///
/// # Safety
/// `key` must be live; `input` and `output` must hold `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn dealab_encrypt(key: *const DealabKey, input: *const u8, output: *mut u8, len: usize) -> DealabStatus {
    transform(key, input, output, len, encrypt)
}

/// # Safety
/// Same contract as [`dealab_encrypt`].
#[no_mangle]
pub unsafe extern "C" fn dealab_decrypt(key: *const DealabKey, input: *const u8, output: *mut u8, len: usize) -> DealabStatus {
    transform(key, input, output, len, decrypt)
}

/// Oracle over a hidden key derived from `seed`. Free with [`dealab_oracle_free`].
///
/// # Safety
/// `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn dealab_oracle_new(
    cipher: DealabCipher,
    seed: u64,
    height: usize,
    width: usize,
    model: DealabModel,
    out: *mut *mut DealabOracle,
) -> DealabStatus {
    guard(|| {
        non_null(out)?;
        let model = match model {
            DealabModel::KnownPlaintext => AttackModel::KnownPlaintext,
            DealabModel::ChosenPlaintext => AttackModel::ChosenPlaintext,
        };
        let oracle = LocalOracle::new(Seed::new(seed, cipher.into()), height, width, model).or_status()?;
        *out = Box::into_raw(Box::new(DealabOracle(oracle)));
        Ok(())
    })
}

/// # Safety
/// `oracle` must come from this library and not be used afterwards. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn dealab_oracle_free(oracle: *mut DealabOracle) {
    if !oracle.is_null() {
        drop(Box::from_raw(oracle));
    }
}

/// # Safety
/// `oracle` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn dealab_oracle_queries(oracle: *const DealabOracle) -> u64 {
    oracle.as_ref().map_or(0, |o| o.0.query_count())
}

/// Runs the chosen-plaintext attack matching the oracle's cipher and returns
/// the recovered key as a new handle usable with [`dealab_decrypt`].
///
/// # Safety
/// `oracle` must be live; `out` must be valid for one write.
#[no_mangle]
pub unsafe extern "C" fn dealab_cp_attack(oracle: *mut DealabOracle, seed: u64, out: *mut *mut DealabKey) -> DealabStatus {
    guard(|| {
        non_null(oracle)?;
        non_null(out)?;
        let o = &mut (*oracle).0;
        let key = match o.key_material().cipher {
            CipherKind::Parvin => cp_attack_parvin_full(o),
            CipherKind::Norouzi => cp_attack_norouzi(o, seed),
            CipherKind::Yang => cp_attack_yang_full(o, seed),
        }
        .or_status()?;
        *out = Box::into_raw(Box::new(DealabKey(key.key_material())));
        Ok(())
    })
}
