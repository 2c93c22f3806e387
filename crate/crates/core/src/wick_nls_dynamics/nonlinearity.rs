//! Trilinear operators N and R and the renormalized nonlinearity N − R.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::spectral_core::{fft::fft_size, FourierField};

fn check_radii(v1: &FourierField, v2: &FourierField, v3: &FourierField) -> Result<usize> {
    let r = v1.radius();
    for v in [v2, v3] {
        if v.radius() != r {
            return Err(Error::RadiusMismatch(r, v.radius()));
        }
    }
    Ok(r)
}

/// Σ_{n = n1 − n2 + n3} v̂1(n1) conj(v̂2(n2)) v̂3(n3), truncated to the common radius.
///
/// Computed as a physical-space product on a grid of at least 4R + 1 points, which is
/// alias-free on the retained modes.
pub fn full_trilinear(v1: &FourierField, v2: &FourierField, v3: &FourierField) -> Result<FourierField> {
    let r = check_radii(v1, v2, v3)?;
    let m = fft_size(4 * r + 1);
    let p1 = v1.to_physical(m);
    let p2 = v2.to_physical(m);
    let p3 = v3.to_physical(m);
    let prod: Vec<C64> = p1.iter().zip(&p2).zip(&p3).map(|((a, b), c)| a * b.conj() * c).collect();
    Ok(FourierField::from_physical(prod, m, r))
}

fn pairing(a: &FourierField, b: &FourierField) -> C64 {
    a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| x * y.conj()).sum()
}

/// The non-resonant part: the full sum minus the terms with n = n1 or n = n3.
///
/// Terms with n1 = n force n2 = n3 and contribute v̂1(n)·Σ_k conj(v̂2(k))v̂3(k); terms with
/// n3 = n contribute v̂3(n)·Σ_k v̂1(k)conj(v̂2(k)); the doubly excluded diagonal is added back.
pub fn nonres_trilinear(v1: &FourierField, v2: &FourierField, v3: &FourierField) -> Result<FourierField> {
    let full = full_trilinear(v1, v2, v3)?;
    let p32 = pairing(v3, v2);
    let p12 = pairing(v1, v2);
    Ok(full.map(|n, c| {
        let (a, b, d) = (v1.get(n), v2.get(n), v3.get(n));
        c - a * p32 - d * p12 + a * b.conj() * d
    }))
}

/// v̂1(n) conj(v̂2(n)) v̂3(n).
pub fn res_trilinear(v1: &FourierField, v2: &FourierField, v3: &FourierField) -> Result<FourierField> {
    check_radii(v1, v2, v3)?;
    Ok(v1.map(|n, a| a * v2.get(n).conj() * v3.get(n)))
}

/// N(v, v, v) − R(v, v, v).
pub fn renorm_nonlinearity(v: &FourierField) -> FourierField {
    let nonres = nonres_trilinear(v, v, v).expect("equal radii");
    let res = res_trilinear(v, v, v).expect("equal radii");
    nonres.try_sub(&res).expect("equal radii")
}

/// (|v|² − 2c)·v evaluated in physical space and returned on the radius of `v`.
pub fn cubic_multiplier(v: &FourierField, c: f64) -> FourierField {
    let r = v.radius();
    let m = fft_size(4 * r + 1);
    let mut phys = v.to_physical(m);
    for z in phys.iter_mut() {
        *z *= z.norm_sqr() - 2.0 * c;
    }
    FourierField::from_physical(phys, m, r)
}

/// (|v|² − 2∫|v|²dx)·v, the physical-space form of N − R.
pub fn renorm_nonlinearity_physical(v: &FourierField) -> FourierField {
    cubic_multiplier(v, v.l2_norm_sq())
}
