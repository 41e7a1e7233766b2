use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::configuration::Configuration;
use super::returns::{nested_return_sets, ReturnSet};
use super::substitution::{BlockSubstitution, WordSubstitution};
use crate::error::{Error, Result};
use crate::point::{check_dim, Point, Window};

/// A minimal free action at finite scale.
#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorSpec {
    BlockSubstitution(BlockSubstitution),
    /// Product of 1-d substitutions, one per axis.
    Product1d(Vec<WordSubstitution>),
    /// `R_n = q_1^n Z x .. x q_d^n Z`, generated directly.
    LatticeModel { q: Vec<i64> },
    /// A raw point set treated as a binary configuration.
    ExplicitPoints { points: Vec<Point>, window: Window },
}

impl GeneratorSpec {
    pub fn lattice(q: Vec<i64>) -> Result<Self> {
        check_dim(q.len())?;
        if let Some(v) = q.iter().find(|&&v| v < 2) {
            return Err(Error::Invalid(format!("lattice expansion {v} must be at least 2")));
        }
        Ok(GeneratorSpec::LatticeModel { q })
    }

    pub fn dim(&self) -> usize {
        match self {
            GeneratorSpec::BlockSubstitution(s) => s.dim(),
            GeneratorSpec::Product1d(f) => f.len(),
            GeneratorSpec::LatticeModel { q } => q.len(),
            GeneratorSpec::ExplicitPoints { window, .. } => window.dim(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            GeneratorSpec::BlockSubstitution(_) => "block_substitution",
            GeneratorSpec::Product1d(_) => "product_1d",
            GeneratorSpec::LatticeModel { .. } => "lattice_model",
            GeneratorSpec::ExplicitPoints { .. } => "explicit_points",
        }
    }

    /// Integer expansion factor per axis, when there is one.
    pub fn expansions(&self) -> Vec<Option<i64>> {
        match self {
            GeneratorSpec::BlockSubstitution(s) => s.shape().iter().map(|&q| Some(q as i64)).collect(),
            GeneratorSpec::Product1d(f) => {
                f.iter().map(|w| w.to_block().map(|b| b.shape()[0] as i64)).collect()
            }
            GeneratorSpec::LatticeModel { q } => q.iter().map(|&v| Some(v)).collect(),
            GeneratorSpec::ExplicitPoints { window, .. } => vec![None; window.dim()],
        }
    }

    fn into_word(self) -> Result<Vec<WordSubstitution>> {
        match self {
            GeneratorSpec::BlockSubstitution(s) if s.dim() == 1 => {
                Ok(vec![WordSubstitution::new(s.alphabet().to_vec(), vec_rules(&s))?])
            }
            GeneratorSpec::Product1d(f) => Ok(f),
            other => Err(Error::Invalid(format!("{} of dimension {} cannot be a product factor", other.kind(), other.dim()))),
        }
    }
}

fn vec_rules(s: &BlockSubstitution) -> Vec<Vec<u32>> {
    (0..s.alphabet_size() as u32).map(|a| s.rule(a).to_vec()).collect()
}

/// Product of 1-d generators. Lattice factors combine into a lattice model;
/// substitution factors into a product of substitutions.
pub fn product_action(factors: Vec<GeneratorSpec>) -> Result<GeneratorSpec> {
    if factors.is_empty() {
        return Err(Error::Invalid("empty product".into()));
    }
    let dim: usize = factors.iter().map(GeneratorSpec::dim).sum();
    check_dim(dim)?;
    if factors.iter().all(|f| matches!(f, GeneratorSpec::LatticeModel { .. })) {
        let q = factors
            .into_iter()
            .flat_map(|f| match f {
                GeneratorSpec::LatticeModel { q } => q,
                _ => unreachable!(),
            })
            .collect();
        return GeneratorSpec::lattice(q);
    }
    let mut words = Vec::new();
    for f in factors {
        words.extend(f.into_word()?);
    }
    Ok(GeneratorSpec::Product1d(words))
}

/// How the cylinder windows `B_n` grow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Schedule {
    /// `n`-th supertile support for substitutions, cubes otherwise.
    Supertile,
    /// Two-sided supertiles: the support of the `n`-fold image of the
    /// `2 x .. x 2` seed around the origin, cubes for point sets.
    Centered,
    /// `[-2^n, 2^n]^d`.
    Cubes,
    Windows(Vec<Window>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RealizeOptions {
    /// Number of return sets, `R_0 .. R_{sets-1}`.
    pub sets: usize,
    pub schedule: Schedule,
    /// Sampled window extent in units of the largest cylinder (or of the
    /// coarsest lattice spacing).
    pub window_factor: f64,
}

impl RealizeOptions {
    pub fn new(sets: usize) -> Self {
        RealizeOptions { sets, schedule: Schedule::Supertile, window_factor: 3.0 }
    }
}

/// Nested return sets of a generator together with the configuration they
/// were scanned from.
#[derive(Clone, Debug, PartialEq)]
pub struct Realization {
    pub sets: Vec<ReturnSet>,
    pub config: Option<Configuration>,
    /// Substitution steps per axis.
    pub iterations: Vec<u32>,
    pub notes: Vec<String>,
}

impl Realization {
    pub fn window(&self) -> &Window {
        self.sets[0].window()
    }
}

fn cube_cylinder(d: usize, n: usize) -> Result<Window> {
    let a = 1i64.checked_shl(n as u32).filter(|&a| a <= 1 << 30).ok_or(Error::Overflow)?;
    Window::cube(d, a)
}

fn explicit_cylinders(schedule: &Schedule, d: usize, sets: usize) -> Result<Option<Vec<Window>>> {
    match schedule {
        Schedule::Supertile | Schedule::Centered => Ok(None),
        Schedule::Cubes => (0..sets).map(|n| cube_cylinder(d, n)).collect::<Result<Vec<_>>>().map(Some),
        Schedule::Windows(ws) => {
            if ws.len() < sets {
                return Err(Error::Invalid(format!("schedule lists {} windows, {} needed", ws.len(), sets)));
            }
            for w in &ws[..sets] {
                w.lo().check_dim(d)?;
            }
            Ok(Some(ws[..sets].to_vec()))
        }
    }
}

fn reach(w: &Window, axis: usize) -> i64 {
    w.lo().coord(axis).abs().max(w.hi().coord(axis) + 1)
}

/// Extent on each side of the origin for a configuration sampled around
/// cylinder `w`.
fn need(w: &Window, axis: usize, factor: f64) -> i64 {
    libm::ceil((factor + 1.0) * reach(w, axis) as f64) as i64
}

pub fn realize(spec: &GeneratorSpec, opts: &RealizeOptions) -> Result<Realization> {
    if opts.sets == 0 {
        return Err(Error::Invalid("at least one return set is needed".into()));
    }
    if !(opts.window_factor > 0.0) {
        return Err(Error::Invalid(format!("window factor {} must be positive", opts.window_factor)));
    }
    let d = spec.dim();
    let explicit = explicit_cylinders(&opts.schedule, d, opts.sets)?;
    match spec {
        GeneratorSpec::LatticeModel { q } => realize_lattice(q, opts, explicit),
        GeneratorSpec::ExplicitPoints { points, window } => {
            let cylinders = match explicit {
                Some(c) => c,
                None => (0..opts.sets).map(|n| cube_cylinder(d, n)).collect::<Result<Vec<_>>>()?,
            };
            let mut sorted = points.clone();
            sorted.sort_unstable();
            let cells = window.points().map(|p| u32::from(sorted.binary_search(&p).is_ok())).collect();
            let cfg = Configuration::new(window.shape(), window.lo(), cells)?;
            let sets = nested_return_sets(&cfg, &cylinders)?;
            Ok(Realization { sets, config: Some(cfg), iterations: vec![], notes: vec![] })
        }
        GeneratorSpec::BlockSubstitution(sub) => {
            let cylinders = match explicit {
                Some(c) => c,
                None => (0..opts.sets as u32)
                    .map(|n| {
                        let w = sub.supertile_window(n)?;
                        if opts.schedule == Schedule::Centered {
                            Window::new(-(w.hi() + Point::new(&vec![1; d])?), w.hi())
                        } else {
                            Ok(w)
                        }
                    })
                    .collect::<Result<Vec<_>>>()?,
            };
            let top = cylinders.last().expect("nonempty");
            let (seed, p) = sub.two_sided_seed()?;
            let mut k = p;
            loop {
                let ok = (0..d).all(|i| {
                    (sub.shape()[i] as i64).checked_pow(k).is_some_and(|ext| ext >= need(top, i, opts.window_factor))
                });
                if ok {
                    break;
                }
                k += p;
                if k > 64 {
                    return Err(Error::Overflow);
                }
            }
            let mut cfg = seed;
            for _ in 0..k {
                cfg = sub.apply(&cfg)?;
            }
            let sets = nested_return_sets(&cfg, &cylinders)?;
            Ok(Realization { sets, config: Some(cfg), iterations: vec![k; d], notes: vec![] })
        }
        GeneratorSpec::Product1d(factors) => {
            let mut configs = Vec::new();
            let mut per_axis: Vec<Vec<Window>> = Vec::new();
            let mut iterations = Vec::new();
            for (i, f) in factors.iter().enumerate() {
                let axis = explicit.as_ref().map(|c| c.iter().map(|w| project(w, i)).collect::<Result<Vec<_>>>()).transpose()?;
                let (cfg, cyl, k) = realize_word(f, opts, axis)?;
                configs.push(cfg);
                per_axis.push(cyl);
                iterations.push(k);
            }
            let sizes: Vec<usize> = factors.iter().map(WordSubstitution::alphabet_size).collect();
            let cfg = Configuration::tensor(&configs, &sizes)?;
            let cylinders = (0..opts.sets)
                .map(|n| {
                    let lo: Vec<i64> = per_axis.iter().map(|c| c[n].lo().coord(0)).collect();
                    let hi: Vec<i64> = per_axis.iter().map(|c| c[n].hi().coord(0)).collect();
                    Window::new(Point::new(&lo)?, Point::new(&hi)?)
                })
                .collect::<Result<Vec<_>>>()?;
            let sets = nested_return_sets(&cfg, &cylinders)?;
            Ok(Realization { sets, config: Some(cfg), iterations, notes: vec![] })
        }
    }
}

fn project(w: &Window, axis: usize) -> Result<Window> {
    Window::new(Point::from1(w.lo().coord(axis)), Point::from1(w.hi().coord(axis)))
}

/// Two-sided fixed point of a word substitution and its supertile
/// cylinders `[0, |sigma^n(y)| - 1]`, where `y` is the letter whose
/// `n`-fold image starts the right half.
fn realize_word(
    sub: &WordSubstitution,
    opts: &RealizeOptions,
    explicit: Option<Vec<Window>>,
) -> Result<(Configuration, Vec<Window>, u32)> {
    let (seed, p) = sub.two_sided_seed()?;
    let (left, right) = (seed.cells()[0], seed.cells()[1]);
    let top = opts.sets as u32 - 1;
    let mut k = p;
    while k < top {
        k += p;
    }
    loop {
        let cylinders = match &explicit {
            Some(c) => c.clone(),
            None => (0..opts.sets as u32)
                .map(|n| {
                    let depth = (k - n) as usize;
                    let len = sub.image_length(sub.first_after(right, depth), n)? as i64;
                    let lo = if opts.schedule == Schedule::Centered {
                        -(sub.image_length(sub.last_after(left, depth), n)? as i64)
                    } else {
                        0
                    };
                    Window::new(Point::from1(lo), Point::from1(len - 1))
                })
                .collect::<Result<Vec<_>>>()?,
        };
        let goal = need(cylinders.last().expect("nonempty"), 0, opts.window_factor) as u64;
        if sub.image_length(left, k)? >= goal && sub.image_length(right, k)? >= goal {
            let mut cfg = seed;
            for _ in 0..k {
                cfg = sub.apply(&cfg)?;
            }
            return Ok((cfg, cylinders, k));
        }
        k += p;
        if k > 256 {
            return Err(Error::Overflow);
        }
    }
}

fn realize_lattice(q: &[i64], opts: &RealizeOptions, explicit: Option<Vec<Window>>) -> Result<Realization> {
    let d = q.len();
    let top = opts.sets as u32 - 1;
    let spacing = q
        .iter()
        .map(|&v| v.checked_pow(top).filter(|&s| s <= 1 << 30).ok_or(Error::Overflow))
        .collect::<Result<Vec<_>>>()?;
    let half = spacing.iter().map(|&s| libm::ceil(opts.window_factor * s as f64) as i64).collect::<Vec<_>>();
    let window = Window::new(Point::new(&half.iter().map(|h| -h).collect::<Vec<_>>())?, Point::new(&half)?)?;
    let mut sets = Vec::with_capacity(opts.sets);
    for n in 0..opts.sets {
        let step: Vec<i64> = q.iter().map(|&v| v.pow(n as u32)).collect();
        let cylinder = match &explicit {
            Some(c) => c[n],
            None => {
                let hi = Point::new(&step.iter().map(|s| s - 1).collect::<Vec<_>>())?;
                let lo = if opts.schedule == Schedule::Centered { -(hi + Point::new(&vec![1; d])?) } else { Point::zero(d) };
                Window::new(lo, hi)?
            }
        };
        let points = window.points().filter(|p| (0..d).all(|i| p.coord(i).rem_euclid(step[i]) == 0)).collect();
        sets.push(ReturnSet::new(points, window, cylinder, n)?);
    }
    let notes = vec![String::from("return sets generated in closed form")];
    Ok(Realization { sets, config: None, iterations: vec![], notes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn pd_word() -> WordSubstitution {
        WordSubstitution::from_strings(&[("a", "ab"), ("b", "aa")]).unwrap()
    }

    fn coords(s: &ReturnSet) -> Vec<i64> {
        s.points().iter().map(|p| p.coord(0)).collect()
    }

    #[test]
    fn lattice_sets_are_scaled_lattices() {
        let spec = GeneratorSpec::lattice(vec![2]).unwrap();
        let r = realize(&spec, &RealizeOptions::new(4)).unwrap();
        assert_eq!(r.window(), &Window::cube(1, 24).unwrap());
        for (n, s) in r.sets.iter().enumerate() {
            let step = 1i64 << n;
            let expect: Vec<i64> = (-24..=24).filter(|x: &i64| x.rem_euclid(step) == 0).collect();
            assert_eq!(coords(s), expect);
        }
    }

    #[test]
    fn period_doubling_sets_nested_and_contain_origin() {
        let pd = pd_word().to_block().unwrap();
        let r = realize(&GeneratorSpec::BlockSubstitution(pd), &RealizeOptions::new(5)).unwrap();
        let cfg = r.config.as_ref().unwrap();
        for (n, s) in r.sets.iter().enumerate() {
            assert!(s.contains(&Point::from1(0)));
            assert_eq!(s.cylinder_window().side(0), 1 << n);
            // oracle: compare symbols directly
            let len = 1i64 << n;
            for p in s.window().points() {
                let hit = (0..len).all(|j| cfg.get(&Point::from1(p.coord(0) + j)) == cfg.get(&Point::from1(j)));
                assert_eq!(hit, s.contains(&p), "level {n} position {p}");
            }
        }
        assert!(r.sets.windows(2).all(|w| w[1].base().is_subset_of(w[0].base())));
        assert!(r.window().contains(&Point::from1(-40)));
    }

    #[test]
    fn product_sets_factor() {
        let spec = product_action(vec![
            GeneratorSpec::Product1d(vec![pd_word()]),
            GeneratorSpec::Product1d(vec![pd_word()]),
        ])
        .unwrap();
        assert_eq!(spec.dim(), 2);
        let opts = RealizeOptions::new(4);
        let prod = realize(&spec, &opts).unwrap();
        let one = realize(&GeneratorSpec::Product1d(vec![pd_word()]), &opts).unwrap();
        for (n, s) in prod.sets.iter().enumerate() {
            let f = coords(&one.sets[n]);
            let expect: Vec<Point> =
                f.iter().flat_map(|&x| f.iter().map(move |&y| Point::from2(x, y))).collect();
            assert_eq!(s.points(), &expect[..]);
        }
    }

    #[test]
    fn trivial_factor_gives_full_axis() {
        let trivial = WordSubstitution::new(vec!["a".to_string()], vec![vec![0, 0]]).unwrap();
        let spec = GeneratorSpec::Product1d(vec![pd_word(), trivial]);
        let r = realize(&spec, &RealizeOptions::new(3)).unwrap();
        let w = *r.window();
        for s in &r.sets {
            let xs: Vec<i64> = s.points().iter().filter(|p| p.coord(1) == 0).map(|p| p.coord(0)).collect();
            let expect: usize = xs.len() * w.side(1);
            assert_eq!(s.points().len(), expect);
        }
    }

    #[test]
    fn fibonacci_cylinders_are_supertiles() {
        let fib = WordSubstitution::from_strings(&[("a", "ab"), ("b", "a")]).unwrap();
        let r = realize(&GeneratorSpec::Product1d(vec![fib]), &RealizeOptions::new(6)).unwrap();
        let sides: Vec<usize> = r.sets.iter().map(|s| s.cylinder_window().side(0)).collect();
        // consecutive supertile lengths are Fibonacci numbers
        for w in sides.windows(3) {
            assert_eq!(w[2], w[1] + w[0]);
        }
    }

    #[test]
    fn explicit_points_with_cubes() {
        let window = Window::cube(1, 40).unwrap();
        let points: Vec<Point> = window.points().filter(|p| p.coord(0).rem_euclid(3) == 0).collect();
        let spec = GeneratorSpec::ExplicitPoints { points, window };
        let r = realize(&spec, &RealizeOptions::new(3)).unwrap();
        for s in &r.sets {
            assert!(s.points().iter().all(|p| p.coord(0) % 3 == 0));
        }
        let too_many = RealizeOptions::new(7);
        assert!(matches!(realize(&spec, &too_many), Err(Error::WindowTooSmall(_))));
    }

    #[test]
    fn product_of_lattices() {
        let spec = product_action(vec![GeneratorSpec::lattice(vec![2]).unwrap(), GeneratorSpec::lattice(vec![3]).unwrap()]).unwrap();
        assert_eq!(spec, GeneratorSpec::LatticeModel { q: vec![2, 3] });
        assert!(product_action(vec![GeneratorSpec::lattice(vec![2, 2]).unwrap(); 2]).is_err());
    }
}
