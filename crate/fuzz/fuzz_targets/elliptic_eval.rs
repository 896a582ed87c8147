#![no_main]

use libfuzzer_sys::fuzz_target;
use spinqsl::elliptic::{
    complete_k, incomplete_e, jacobi_sncndn, EllipticModulus, EllipticParameter,
};

// 32 bytes decode to (u, k, phi, m); the functions must never panic, and
// the algebraic identities must hold wherever the inputs are sane.
fuzz_target!(|data: &[u8]| {
    if data.len() < 32 {
        return;
    }
    let f = |i: usize| f64::from_le_bytes(data[8 * i..8 * i + 8].try_into().unwrap());
    let (u, k_raw, phi, m_raw) = (f(0), f(1), f(2), f(3));

    if let Ok(k) = EllipticModulus::new(k_raw) {
        let (sn, cn, dn) = jacobi_sncndn(u, k);
        if u.is_finite() && u.abs() < 1e6 {
            assert!((sn * sn + cn * cn - 1.0).abs() < 1e-9, "sn/cn identity");
            assert!((dn * dn + k.m() * sn * sn - 1.0).abs() < 1e-9, "dn identity");
        }
        let _ = complete_k(k);
    }
    if let Ok(m) = EllipticParameter::new(m_raw) {
        if phi.is_finite() && phi.abs() < 1e6 && m.m() > -1e12 {
            let value = incomplete_e(phi, m);
            assert!(value.is_finite(), "E(phi|m) must be finite on the sane domain");
        }
    }
});
