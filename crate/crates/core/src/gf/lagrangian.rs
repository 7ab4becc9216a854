use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::{FieldSpec, Subspace};
use crate::{Error, Result};

/// Upper bound on `p^{2n}` and on the number of Lagrangians for enumeration.
pub const LAGRANGIAN_GUARD: u64 = 1 << 20;

/// Number of Lagrangian subspaces of `F_p^{2n}`: `Π_{i=1}^{n} (p^i + 1)`.
pub fn lagrangian_count(spec: &FieldSpec, n: usize) -> Option<u64> {
    let mut acc: u64 = 1;
    for i in 1..=n {
        acc = acc.checked_mul(spec.size_of(i)?.checked_add(1)?)?;
    }
    Some(acc)
}

/// All Lagrangian subspaces of `F_p^{2n}`, in canonical order.
///
/// Built level by level: every isotropic subspace of dimension `k` is
/// extended by each vector of its symplectic complement outside it.
pub fn enumerate_lagrangians(spec: &FieldSpec, n: usize) -> Result<Vec<Subspace>> {
    spec.guarded_size("phase space", 2 * n, LAGRANGIAN_GUARD)?;
    let count = lagrangian_count(spec, n).unwrap_or(u64::MAX);
    if count > LAGRANGIAN_GUARD {
        return Err(Error::SizeGuard { what: "Lagrangian subspaces", size: count, limit: LAGRANGIAN_GUARD });
    }
    let mut level: BTreeSet<Subspace> = BTreeSet::new();
    level.insert(Subspace::zero(2 * n));
    for _ in 0..n {
        let mut next = BTreeSet::new();
        for x in &level {
            let comp = x.symp_complement(spec)?;
            let mut seen = BTreeSet::new();
            for y in comp.elements(spec) {
                let r = x.reduce(spec, &y);
                // One representative per projective point of comp / x.
                match r.iter().find(|&&e| e != 0) {
                    Some(&1) => {}
                    _ => continue,
                }
                if !seen.insert(r.clone()) {
                    continue;
                }
                let mut rows = x.basis_vectors();
                rows.push(r);
                next.insert(Subspace::span(spec, 2 * n, &rows));
            }
        }
        level = next;
    }
    Ok(level.into_iter().collect())
}

/// The lexicographically first nonzero `(δ1, δ2, δ3)` with `δ1² + δ2² + δ3² ≡ 0`.
pub fn find_zero_sum_of_three_squares(spec: &FieldSpec) -> [u8; 3] {
    let p = spec.p() as u8;
    for a in 0..p {
        for b in 0..p {
            for c in 0..p {
                if (a, b, c) == (0, 0, 0) {
                    continue;
                }
                let sum = spec.add(spec.add(spec.mul(a, a), spec.mul(b, b)), spec.mul(c, c));
                if sum == 0 {
                    return [a, b, c];
                }
            }
        }
    }
    unreachable!("every odd prime admits a nontrivial zero sum of three squares")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::VectorIter;

    fn f(p: u32) -> FieldSpec {
        FieldSpec::new(p).unwrap()
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_lagrangians(&f(3), 1).unwrap().len(), 4);
        assert_eq!(enumerate_lagrangians(&f(5), 1).unwrap().len(), 6);
        assert_eq!(enumerate_lagrangians(&f(3), 2).unwrap().len(), 40);
        assert_eq!(lagrangian_count(&f(3), 2), Some(40));
    }

    #[test]
    fn lines_of_f3_squared() {
        let s = f(3);
        let got = enumerate_lagrangians(&s, 1).unwrap();
        let mut want: Vec<Subspace> =
            [[1u8, 0], [0, 1], [1, 1], [1, 2]].iter().map(|v| Subspace::span(&s, 2, &[*v])).collect();
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn all_outputs_are_lagrangian_and_distinct() {
        let s = f(3);
        let all = enumerate_lagrangians(&s, 3).unwrap();
        assert_eq!(all.len() as u64, lagrangian_count(&s, 3).unwrap());
        for m in &all {
            assert!(m.is_lagrangian(&s));
            assert_eq!(&m.symp_complement(&s).unwrap(), m);
        }
        let unique: BTreeSet<_> = all.iter().collect();
        assert_eq!(unique.len(), all.len());
    }

    #[test]
    fn filter_oracle_over_all_planes() {
        // Every 2-dim subspace of F_3^4, found by spanning all pairs.
        let s = f(3);
        let vs: Vec<Vec<u8>> = VectorIter::new(&s, 4).collect();
        let mut planes = BTreeSet::new();
        for a in &vs {
            for b in &vs {
                let x = Subspace::span(&s, 4, &[a.clone(), b.clone()]);
                if x.dim() == 2 {
                    planes.insert(x);
                }
            }
        }
        assert_eq!(planes.len(), 130);
        let lag: Vec<Subspace> = planes.into_iter().filter(|x| &x.symp_complement(&s).unwrap() == x).collect();
        assert_eq!(lag, enumerate_lagrangians(&s, 2).unwrap());
    }

    #[test]
    fn guard_rejects_large_instances() {
        assert!(matches!(enumerate_lagrangians(&f(3), 7), Err(Error::SizeGuard { .. })));
        assert!(matches!(enumerate_lagrangians(&f(3), 6), Err(Error::SizeGuard { .. })));
    }

    #[test]
    fn three_squares() {
        assert_eq!(find_zero_sum_of_three_squares(&f(3)), [1, 1, 1]);
        assert_eq!(find_zero_sum_of_three_squares(&f(5)), [0, 1, 2]);
        assert_eq!(find_zero_sum_of_three_squares(&f(7)), [1, 2, 3]);
        for p in [11u32, 13, 101, 127] {
            let s = f(p);
            let d = find_zero_sum_of_three_squares(&s);
            let sum: u32 = d.iter().map(|&x| x as u32 * x as u32).sum();
            assert_eq!(sum % p, 0);
        }
    }
}
