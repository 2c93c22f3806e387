//! Right-hand sides of the eleven counting bounds.

use serde::{Deserialize, Serialize};

use super::{DyadicTuple, Slot};

/// ε used in every ε-power bound.
pub const COUNTING_EPS: f64 = 0.25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BoundId {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
    H,
    I,
    J,
    K,
}

impl BoundId {
    pub const ALL: [BoundId; 11] = [
        BoundId::A,
        BoundId::B,
        BoundId::C,
        BoundId::D,
        BoundId::E,
        BoundId::F,
        BoundId::G,
        BoundId::H,
        BoundId::I,
        BoundId::J,
        BoundId::K,
    ];

    pub fn label(self) -> &'static str {
        ["ii.a", "ii.b", "ii.c", "ii.d", "ii.e", "ii.f", "ii.g", "ii.h", "ii.i", "ii.j", "ii.k"][self as usize]
    }

    /// Slots held fixed in the bounded section.
    pub fn fixed(self) -> &'static [Slot] {
        use Slot::*;
        match self {
            BoundId::A => &[],
            BoundId::B => &[N],
            BoundId::C => &[N1],
            BoundId::D => &[N2],
            BoundId::E => &[N3],
            BoundId::F => &[N, N1],
            BoundId::G => &[N, N2],
            BoundId::H => &[N, N3],
            BoundId::I => &[N1, N2],
            BoundId::J => &[N1, N3],
            BoundId::K => &[N2, N3],
        }
    }

    /// Bound shape at the given tuple and ε.
    pub fn value(self, t: &DyadicTuple, eps: f64) -> f64 {
        let (n, n1, n2, n3) = (t.n as f64, t.n1 as f64, t.n2 as f64, t.n3 as f64);
        let e = |x: f64| x.powf(eps);
        let e1 = |x: f64| x.powf(1.0 + eps);
        let min = |v: &[f64]| v.iter().copied().fold(f64::INFINITY, f64::min);
        match self {
            BoundId::A => min(&[
                n1 * n1 * n3 * n3 * e(n.min(n2)),
                n * n * n2 * n2 * e(n1.min(n3)),
                n.min(n2).powi(2) * e1(n1 * n3),
                n1.min(n3).powi(2) * e1(n * n2),
            ]),
            BoundId::B => min(&[n2 * n2 * e(n1.min(n3)), e1(n1 * n2), e1(n1 * n3), e1(n2 * n3)]),
            BoundId::C => min(&[n3 * n3 * e(n.min(n2)), e1(n * n2), e1(n * n3), e1(n2 * n3)]),
            BoundId::D => min(&[n * n * e(n1.min(n3)), e1(n * n1), e1(n * n3), e1(n1 * n3)]),
            BoundId::E => min(&[n1 * n1 * e(n.min(n2)), e1(n * n1), e1(n * n2), e1(n1 * n2)]),
            BoundId::F => n2.min(n3),
            BoundId::G => e(n1.min(n3)),
            BoundId::H => n1.min(n2),
            BoundId::I => n.min(n3),
            BoundId::J => e(n.min(n2)),
            BoundId::K => n.min(n1),
        }
    }
}
