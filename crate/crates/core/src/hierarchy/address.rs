use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use super::data::CombinatorialData;
use crate::error::{Error, Result};
use crate::point::Point;

/// `P^m_n(p)`: the points of `R_n` reached from `p in R_m` by descending
/// through the patches of levels `m-1, .., n`. Sorted.
pub fn composite_patch(data: &CombinatorialData, n: usize, m: usize, p: &Point) -> Result<Vec<Point>> {
    if n > m {
        return Err(Error::Invalid(format!("composite patch needs n <= m, got n = {n}, m = {m}")));
    }
    if m > data.len() {
        return Err(Error::TooFewLevels { needed: m, have: data.len() });
    }
    if !data.returns(m)?.contains(p) {
        return Err(Error::Invalid(format!("{p} is not in R_{m}")));
    }
    let mut current = vec![*p];
    for j in (n..m).rev() {
        let part = &data.level(j)?.partition;
        let mut next = Vec::new();
        for q in &current {
            next.extend_from_slice(part.complete_patch(q)?);
        }
        next.sort_unstable();
        current = next;
    }
    Ok(current)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Address {
    pub m0: usize,
    /// `p_0 = 0, .., p_{m0-n0} = p`.
    pub path: Vec<Point>,
}

/// The unique `m0 >= n0` and path `0 = p_0, .., p_{m0-n0} = p` with
/// `p_l in P_{m0-l}(p_{l-1})`, found by following owners upward from `p`.
/// The defining conditions are verified before returning.
pub fn address(data: &CombinatorialData, p: &Point, n0: usize) -> Result<Address> {
    if !data.returns(n0)?.contains(p) {
        return Err(Error::Invalid(format!("{p} is not in R_{n0}")));
    }
    let mut chain = vec![*p];
    let mut a = *p;
    let mut j = n0;
    while !a.is_zero() {
        if j >= data.len() {
            return Err(Error::Unreachable(*p));
        }
        a = data.levels()[j].partition.owner_of(&a).ok_or(Error::Unreachable(*p))?;
        chain.push(a);
        j += 1;
    }
    chain.reverse();
    let found = Address { m0: j, path: chain };
    verify_address(data, p, n0, &found)?;
    Ok(found)
}

/// Checks the four defining conditions and the minimality of `m0`.
pub fn verify_address(data: &CombinatorialData, p: &Point, n0: usize, addr: &Address) -> Result<()> {
    let fail = |what: &str| Err(Error::Invariant(format!("address of {p} from level {n0}: {what}")));
    let m0 = addr.m0;
    if m0 < n0 || addr.path.len() != m0 - n0 + 1 {
        return fail("path length does not match m0");
    }
    if !addr.path[0].is_zero() {
        return fail("path does not start at the origin");
    }
    if addr.path[m0 - n0] != *p {
        return fail("path does not end at p");
    }
    for l in 1..=m0 - n0 {
        let patch = data.level(m0 - l)?.partition.complete_patch(&addr.path[l - 1])?;
        if patch.binary_search(&addr.path[l]).is_err() {
            return fail(&format!("step {l} leaves the patch of {}", addr.path[l - 1]));
        }
        if composite_patch(data, n0, m0 - l, &addr.path[l])?.binary_search(p).is_err() {
            return fail(&format!("p is not below step {l}"));
        }
    }
    if composite_patch(data, n0, m0, &addr.path[0])?.binary_search(p).is_err() {
        return fail("p is not in the composite patch of the origin");
    }
    if m0 > n0 && composite_patch(data, n0, m0 - 1, &addr.path[0])?.binary_search(p).is_ok() {
        return fail("m0 is not minimal");
    }
    Ok(())
}

/// Every point reached by composite patches of the origin up to level `m`.
pub fn reachable(data: &CombinatorialData, n0: usize, m: usize) -> Result<BTreeSet<Point>> {
    let o = data.base_point();
    Ok(composite_patch(data, n0, m, &o)?.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::super::data::{build_data, HierarchyOptions};
    use super::*;
    use crate::generators::{realize, GeneratorSpec, RealizeOptions};

    fn lattice_data(q: Vec<i64>, levels: usize) -> CombinatorialData {
        let sets = realize(&GeneratorSpec::lattice(q).unwrap(), &RealizeOptions::new(levels + 2)).unwrap().sets;
        build_data(&sets, HierarchyOptions::default()).unwrap()
    }

    fn line(v: &[i64]) -> Vec<Point> {
        v.iter().map(|&x| Point::from1(x)).collect()
    }

    #[test]
    fn composite_patches_on_the_line() {
        let data = lattice_data(vec![2], 4);
        let o = Point::from1(0);
        assert_eq!(composite_patch(&data, 2, 2, &o).unwrap(), line(&[0]));
        assert_eq!(composite_patch(&data, 0, 2, &o).unwrap(), line(&[0, 1, 2, 3]));
        assert_eq!(composite_patch(&data, 0, 3, &o).unwrap(), line(&(0..8).collect::<Vec<_>>()));
        assert!(composite_patch(&data, 0, 2, &Point::from1(2)).is_err());
    }

    #[test]
    fn composite_sizes_on_the_plane() {
        let data = lattice_data(vec![2, 2], 3);
        for m in 0..=3usize {
            assert_eq!(composite_patch(&data, 0, m, &Point::from2(0, 0)).unwrap().len(), 1 << (2 * m));
        }
    }

    #[test]
    fn addresses() {
        let data = lattice_data(vec![2], 4);
        assert_eq!(address(&data, &Point::from1(0), 1).unwrap(), Address { m0: 1, path: line(&[0]) });
        assert_eq!(address(&data, &Point::from1(5), 0).unwrap(), Address { m0: 3, path: line(&[0, 4, 4, 5]) });
        assert!(matches!(address(&data, &Point::from1(-1), 0), Err(Error::Unreachable(_))));
        let plane = lattice_data(vec![2, 2], 2);
        let a = address(&plane, &Point::from2(1, 1), 0).unwrap();
        assert_eq!(a, Address { m0: 1, path: vec![Point::from2(0, 0), Point::from2(1, 1)] });
    }

    #[test]
    fn corrupted_paths_are_rejected() {
        let data = lattice_data(vec![2], 4);
        let p = Point::from1(5);
        let bad = [
            Address { m0: 3, path: line(&[0, 4, 6, 5]) },
            Address { m0: 4, path: line(&[0, 0, 4, 4, 5]) },
            Address { m0: 3, path: line(&[0, 4, 4, 4]) },
        ];
        for b in bad {
            assert!(verify_address(&data, &p, 0, &b).is_err(), "{b:?}");
        }
    }
}
