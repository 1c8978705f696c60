//! Brute-force class lists: canonicalize every primitive irreducible form in
//! a coefficient box.

use std::collections::BTreeSet;

use selmer3::forms::{canonicalize, BinaryCubicForm};

/// `1 <= a <= max_a`, `|b|, |c|, |d| <= max_rest`. Negating a form is a
/// proper substitution, so `a > 0` loses nothing.
#[derive(Clone, Copy, Debug)]
pub struct CoefficientBox {
    pub max_a: i64,
    pub max_rest: i64,
}

/// Canonical representatives of the classes met by the box, keyed by
/// coefficients, for discriminants `lo < D < hi`.
pub fn brute_force_classes(lo: i64, hi: i64, bx: CoefficientBox) -> BTreeSet<[i64; 4]> {
    let r = bx.max_rest;
    let mut out = BTreeSet::new();
    for a in 1..=bx.max_a {
        for b in -r..=r {
            for c in -r..=r {
                for d in -r..=r {
                    let disc = b * b * c * c + 18 * a * b * c * d
                        - 27 * a * a * d * d
                        - 4 * b * b * b * d
                        - 4 * c * c * c * a;
                    if disc <= lo || disc >= hi || disc == 0 {
                        continue;
                    }
                    let f = BinaryCubicForm::from_i64(a, b, c, d);
                    if !f.is_primitive() || !f.is_irreducible() {
                        continue;
                    }
                    let g = canonicalize(&f).expect("irreducible with D != 0");
                    out.insert(g.to_i64s().expect("small coefficients"));
                }
            }
        }
    }
    out
}

pub const SMALL_BOX: CoefficientBox = CoefficientBox { max_a: 8, max_rest: 16 };
pub const LARGE_BOX: CoefficientBox = CoefficientBox { max_a: 12, max_rest: 24 };
