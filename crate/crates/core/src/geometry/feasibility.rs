//! Exact feasibility of small closed linear systems by Fourier–Motzkin
//! elimination over the integers.
//!
//! Constraints are kept with integer coefficients, normalized by the gcd of
//! all their entries, and deduplicated after every elimination round.
//! Equalities are substituted out before elimination starts.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::point::MAX_DIM;

/// `normal . y <= bound` (or `=` for equalities).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Constraint {
    pub normal: [i128; MAX_DIM],
    pub bound: i128,
}

impl Constraint {
    pub fn new(normal: &[i128], bound: i128) -> Self {
        let mut n = [0i128; MAX_DIM];
        n[..normal.len()].copy_from_slice(normal);
        Constraint { normal: n, bound }
    }

    fn is_trivial(&self) -> bool {
        self.normal.iter().all(|&a| a == 0)
    }

    /// Divides by the positive gcd of all entries.
    fn normalized(mut self) -> Self {
        let mut g = self.bound.abs();
        for a in self.normal {
            g = g.gcd(&a);
        }
        if g > 1 {
            for a in self.normal.iter_mut() {
                *a /= g;
            }
            self.bound /= g;
        }
        self
    }
}

fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or(Error::Overflow)
}

fn sub(a: i128, b: i128) -> Result<i128> {
    a.checked_sub(b).ok_or(Error::Overflow)
}

fn add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or(Error::Overflow)
}

/// `alpha * c + beta * e`, entrywise.
fn combine(alpha: i128, c: &Constraint, beta: i128, e: &Constraint) -> Result<Constraint> {
    let mut out = Constraint { normal: [0; MAX_DIM], bound: 0 };
    for i in 0..MAX_DIM {
        out.normal[i] = add(mul(alpha, c.normal[i])?, mul(beta, e.normal[i])?)?;
    }
    out.bound = add(mul(alpha, c.bound)?, mul(beta, e.bound)?)?;
    Ok(out.normalized())
}

#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    dim: usize,
    ineqs: Vec<Constraint>,
    eqs: Vec<Constraint>,
}

impl LinearSystem {
    pub fn new(dim: usize) -> Self {
        assert!(dim <= MAX_DIM);
        LinearSystem { dim, ineqs: Vec::new(), eqs: Vec::new() }
    }

    pub fn add_le(&mut self, normal: &[i128], bound: i128) {
        debug_assert_eq!(normal.len(), self.dim);
        self.ineqs.push(Constraint::new(normal, bound));
    }

    pub fn add_eq(&mut self, normal: &[i128], bound: i128) {
        debug_assert_eq!(normal.len(), self.dim);
        self.eqs.push(Constraint::new(normal, bound));
    }

    pub fn is_feasible(&self) -> Result<bool> {
        let mut ineqs = self.ineqs.clone();
        let mut eqs = self.eqs.clone();
        while let Some(e) = eqs.pop() {
            let Some(j) = (0..self.dim).find(|&j| e.normal[j] != 0) else {
                if e.bound != 0 {
                    return Ok(false);
                }
                continue;
            };
            let ej = e.normal[j];
            // |e_j| c - sign(e_j) c_j e zeroes coordinate j and keeps the
            // direction of an inequality
            for c in ineqs.iter_mut().chain(eqs.iter_mut()) {
                if c.normal[j] != 0 {
                    *c = combine(ej.abs(), c, -ej.signum() * c.normal[j], &e)?;
                }
            }
        }
        eliminate(ineqs, self.dim)
    }
}

fn eliminate(ineqs: Vec<Constraint>, dim: usize) -> Result<bool> {
    let mut current: BTreeSet<Constraint> = BTreeSet::new();
    for c in ineqs {
        let c = c.normalized();
        if c.is_trivial() {
            if c.bound < 0 {
                return Ok(false);
            }
        } else {
            current.insert(c);
        }
    }
    loop {
        let active: Vec<usize> = (0..dim).filter(|&j| current.iter().any(|c| c.normal[j] != 0)).collect();
        match active.len() {
            0 => return Ok(true),
            1 => return interval_check(&current, active[0]),
            _ => {}
        }
        let (var, _) = active
            .iter()
            .map(|&j| {
                let pos = current.iter().filter(|c| c.normal[j] > 0).count();
                let neg = current.iter().filter(|c| c.normal[j] < 0).count();
                (j, pos * neg)
            })
            .min_by_key(|&(j, cost)| (cost, j))
            .expect("active variable");
        let (pos, rest): (Vec<Constraint>, Vec<Constraint>) = current.iter().partition(|c| c.normal[var] > 0);
        let (neg, zero): (Vec<Constraint>, Vec<Constraint>) = rest.into_iter().partition(|c| c.normal[var] < 0);
        let mut next: BTreeSet<Constraint> = zero.into_iter().collect();
        for p in &pos {
            for n in &neg {
                let c = combine(-n.normal[var], p, p.normal[var], n)?;
                if c.is_trivial() {
                    if c.bound < 0 {
                        return Ok(false);
                    }
                } else {
                    next.insert(c);
                }
            }
        }
        current = next;
    }
}

/// Single remaining variable: max of lower bounds <= min of upper bounds.
fn interval_check(cs: &BTreeSet<Constraint>, var: usize) -> Result<bool> {
    // bounds as fractions num/den with den > 0
    let mut lower: Option<(i128, i128)> = None;
    let mut upper: Option<(i128, i128)> = None;
    let less = |a: (i128, i128), b: (i128, i128)| -> Result<bool> { Ok(mul(a.0, b.1)? < mul(b.0, a.1)?) };
    for c in cs {
        let a = c.normal[var];
        if a > 0 {
            let v = (c.bound, a);
            if upper.map_or(Ok(true), |u| less(v, u))? {
                upper = Some(v);
            }
        } else {
            let v = (-c.bound, -a);
            if lower.map_or(Ok(true), |l| less(l, v))? {
                lower = Some(v);
            }
        }
    }
    match (lower, upper) {
        (Some(l), Some(u)) => Ok(sub(mul(u.0, l.1)?, mul(l.0, u.1)?)? >= 0),
        _ => Ok(true),
    }
}
