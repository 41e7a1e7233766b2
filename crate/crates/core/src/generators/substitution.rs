use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::configuration::{Configuration, Symbol};
use crate::error::{Error, Result};
use crate::point::{check_dim, Point, Window};

/// Whether the occurrence matrix has a power with all entries positive.
/// Powers are tried up to `n^2`.
fn is_primitive_matrix(occurs: &[Vec<bool>]) -> bool {
    let n = occurs.len();
    let mut power = occurs.to_vec();
    for _ in 0..n * n {
        if power.iter().all(|row| row.iter().all(|&x| x)) {
            return true;
        }
        let mut next = vec![vec![false; n]; n];
        for i in 0..n {
            for k in 0..n {
                if power[i][k] {
                    for j in 0..n {
                        next[i][j] |= occurs[k][j];
                    }
                }
            }
        }
        power = next;
    }
    false
}

fn check_alphabet(alphabet: &[String]) -> Result<()> {
    if alphabet.is_empty() {
        return Err(Error::Invalid("empty alphabet".into()));
    }
    let distinct: BTreeSet<&String> = alphabet.iter().collect();
    if distinct.len() != alphabet.len() {
        return Err(Error::Invalid("duplicate alphabet symbol".into()));
    }
    Ok(())
}

/// Constant-shape substitution on `Z^d`: every symbol maps to a
/// `q_1 x .. x q_d` block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSubstitution {
    alphabet: Vec<String>,
    shape: Vec<usize>,
    rules: Vec<Vec<Symbol>>,
}

impl BlockSubstitution {
    /// `rules[s]` is the image of symbol `s`, row-major with axis 0 most
    /// significant.
    pub fn new(alphabet: Vec<String>, shape: Vec<usize>, rules: Vec<Vec<Symbol>>) -> Result<Self> {
        check_dim(shape.len())?;
        check_alphabet(&alphabet)?;
        if let Some(q) = shape.iter().find(|&&q| q < 2) {
            return Err(Error::Invalid(format!("expansion factor {q} must be at least 2")));
        }
        if rules.len() != alphabet.len() {
            return Err(Error::Invalid(format!("{} rules for {} symbols", rules.len(), alphabet.len())));
        }
        let cells: usize = shape.iter().product();
        for (s, img) in rules.iter().enumerate() {
            if img.len() != cells {
                return Err(Error::Invalid(format!(
                    "rule for symbol '{}' has {} cells, shape {:?} needs {}",
                    alphabet[s],
                    img.len(),
                    shape,
                    cells
                )));
            }
            if let Some(t) = img.iter().find(|&&t| t as usize >= alphabet.len()) {
                return Err(Error::Invalid(format!("rule for symbol '{}' uses unknown symbol {t}", alphabet[s])));
            }
        }
        let sub = BlockSubstitution { alphabet, shape, rules };
        if !sub.is_primitive() {
            return Err(Error::NotPrimitive);
        }
        Ok(sub)
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn rule(&self, s: Symbol) -> &[Symbol] {
        &self.rules[s as usize]
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.alphabet.iter().position(|a| a == name).map(|i| i as Symbol)
    }

    fn is_primitive(&self) -> bool {
        let n = self.alphabet.len();
        let occurs: Vec<Vec<bool>> = self
            .rules
            .iter()
            .map(|img| {
                let mut row = vec![false; n];
                for &t in img {
                    row[t as usize] = true;
                }
                row
            })
            .collect();
        is_primitive_matrix(&occurs)
    }

    fn block_window(&self) -> Window {
        let hi: Vec<i64> = self.shape.iter().map(|&q| q as i64 - 1).collect();
        Window::new(Point::zero(self.dim()), Point::new(&hi).expect("shape")).expect("block")
    }

    /// Support `[0, q^n - 1]` of an `n`-th order supertile.
    pub fn supertile_window(&self, n: u32) -> Result<Window> {
        let hi = self
            .shape
            .iter()
            .map(|&q| (q as i64).checked_pow(n).map(|v| v - 1).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()?;
        Window::new(Point::zero(self.dim()), Point::new(&hi)?)
    }

    /// One substitution step; the cell at `x` becomes the block at `q x`.
    pub fn apply(&self, config: &Configuration) -> Result<Configuration> {
        if config.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: config.dim() });
        }
        let d = self.dim();
        let shape: Vec<usize> = (0..d).map(|i| config.shape()[i] * self.shape[i]).collect();
        let q: Vec<i64> = self.shape.iter().map(|&q| q as i64).collect();
        let offset = config.offset().scale_axes(&q)?;
        let total: usize = shape.iter().product();
        if total > (1usize << 31) {
            return Err(Error::Overflow);
        }
        let src = config.window();
        let block = self.block_window();
        let dst = Window::new(offset, offset + Point::new(&shape.iter().map(|&s| s as i64 - 1).collect::<Vec<_>>())?)?;
        let mut cells = vec![0; total];
        for (i, x) in src.points().enumerate() {
            let base = x.scale_axes(&q)?;
            for (j, b) in block.points().enumerate() {
                let k = dst.index_of(&(base + b)).expect("image inside support");
                cells[k] = self.rules[config.cells()[i] as usize][j];
            }
        }
        Configuration::new(shape, offset, cells)
    }

    /// The `iterations`-fold image of `seed`, with the seed cell at the origin.
    pub fn expand(&self, seed: Symbol, iterations: u32) -> Result<Configuration> {
        self.check_symbol(seed)?;
        let mut c = Configuration::new(vec![1; self.dim()], Point::zero(self.dim()), vec![seed])?;
        for _ in 0..iterations {
            c = self.apply(&c)?;
        }
        Ok(c)
    }

    /// Like `expand`, but requires `seed` to sit at the origin corner of its
    /// own image, so successive expansions extend one another.
    pub fn expand_fixed(&self, seed: Symbol, iterations: u32) -> Result<Configuration> {
        self.check_symbol(seed)?;
        if self.corner(seed, 0) != seed {
            return Err(Error::Invalid(format!(
                "symbol '{}' is not a fixed-point seed; use fixed_point_seed and a power of the rule",
                self.alphabet[seed as usize]
            )));
        }
        self.expand(seed, iterations)
    }

    fn check_symbol(&self, s: Symbol) -> Result<()> {
        if (s as usize) < self.alphabet.len() {
            Ok(())
        } else {
            Err(Error::Invalid(format!("symbol {s} outside alphabet")))
        }
    }

    /// The substitution iterated `p` times.
    pub fn power(&self, p: u32) -> Result<BlockSubstitution> {
        if p == 0 {
            return Err(Error::Invalid("power must be positive".into()));
        }
        let rules = (0..self.alphabet.len() as Symbol)
            .map(|s| self.expand(s, p).map(|c| c.cells().to_vec()))
            .collect::<Result<Vec<_>>>()?;
        let shape = self.shape.iter().map(|&q| q.checked_pow(p).ok_or(Error::Overflow)).collect::<Result<Vec<_>>>()?;
        Ok(BlockSubstitution { alphabet: self.alphabet.clone(), shape, rules })
    }

    /// Corner cell of the image of `s`; bit `i` of `high` selects the last
    /// cell along axis `i`.
    pub fn corner(&self, s: Symbol, high: usize) -> Symbol {
        let c: Vec<i64> = (0..self.dim())
            .map(|i| if high >> i & 1 == 1 { self.shape[i] as i64 - 1 } else { 0 })
            .collect();
        let idx = self.block_window().index_of(&Point::new(&c).expect("corner")).expect("corner in block");
        self.rules[s as usize][idx]
    }

    fn corner_power(&self, mut s: Symbol, high: usize, p: usize) -> Symbol {
        for _ in 0..p {
            s = self.corner(s, high);
        }
        s
    }

    /// A symbol sitting at the origin corner of its image under some power
    /// `p <= |alphabet|`, with the smallest such `p`.
    pub fn fixed_point_seed(&self) -> Result<(Symbol, u32)> {
        let n = self.alphabet.len();
        for p in 1..=n {
            for s in 0..n as Symbol {
                if self.corner_power(s, 0, p) == s {
                    return Ok((s, p as u32));
                }
            }
        }
        Err(Error::NoFixedPointSeed(n))
    }

    /// All `2 x .. x 2` blocks occurring in some iterate of a symbol,
    /// listed in `[-1, 0]^d` window order.
    pub fn legal_blocks(&self) -> BTreeSet<Vec<Symbol>> {
        let d = self.dim();
        let unit = Window::new(Point::zero(d), Point::new(&vec![1; d]).expect("dim")).expect("dim");
        let subblocks = |c: &Configuration, out: &mut Vec<Vec<Symbol>>| {
            let w = c.window();
            let starts = Window::new(w.lo(), w.hi() - Point::new(&vec![1; d]).expect("dim"));
            if let Ok(starts) = starts {
                for s in starts.points() {
                    out.push(unit.points().map(|u| c.get(&(s + u)).expect("inside")).collect());
                }
            }
        };
        let mut found = Vec::new();
        for s in 0..self.alphabet.len() as Symbol {
            let c = self.expand(s, 1).expect("one step");
            subblocks(&c, &mut found);
        }
        let mut legal: BTreeSet<Vec<Symbol>> = BTreeSet::new();
        let mut queue: VecDeque<Vec<Symbol>> = VecDeque::new();
        for b in found {
            if legal.insert(b.clone()) {
                queue.push_back(b);
            }
        }
        while let Some(b) = queue.pop_front() {
            let c = Configuration::new(vec![2; d], Point::zero(d), b).expect("block");
            let img = self.apply(&c).expect("image");
            let mut out = Vec::new();
            subblocks(&img, &mut out);
            for nb in out {
                if legal.insert(nb.clone()) {
                    queue.push_back(nb);
                }
            }
        }
        legal
    }

    /// A legal `2 x .. x 2` seed on `[-1, 0]^d` whose cells are fixed corners
    /// of some power `p`, so iterating it fills every orthant. Returns the seed
    /// configuration and `p`.
    pub fn two_sided_seed(&self) -> Result<(Configuration, u32)> {
        let d = self.dim();
        let seed_window = Window::new(Point::new(&vec![-1; d])?, Point::zero(d))?;
        // the cell at -1 along axis i is anchored at the high corner of its image
        let anchors: Vec<usize> = seed_window
            .points()
            .map(|x| (0..d).filter(|&i| x.coord(i) == -1).fold(0, |m, i| m | 1 << i))
            .collect();
        let legal = self.legal_blocks();
        for p in 1..=legal.len() {
            for b in &legal {
                if b.iter().zip(&anchors).all(|(&s, &hi)| self.corner_power(s, hi, p) == s) {
                    let cfg = Configuration::new(vec![2; d], seed_window.lo(), b.clone())?;
                    return Ok((cfg, p as u32));
                }
            }
        }
        Err(Error::NoFixedPointSeed(self.alphabet.len()))
    }
}

/// Substitution on words with images of arbitrary positive length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordSubstitution {
    alphabet: Vec<String>,
    rules: Vec<Vec<Symbol>>,
}

impl WordSubstitution {
    pub fn new(alphabet: Vec<String>, rules: Vec<Vec<Symbol>>) -> Result<Self> {
        check_alphabet(&alphabet)?;
        if rules.len() != alphabet.len() {
            return Err(Error::Invalid(format!("{} rules for {} symbols", rules.len(), alphabet.len())));
        }
        for (s, img) in rules.iter().enumerate() {
            if img.is_empty() {
                return Err(Error::Invalid(format!("rule for symbol '{}' is empty", alphabet[s])));
            }
            if let Some(t) = img.iter().find(|&&t| t as usize >= alphabet.len()) {
                return Err(Error::Invalid(format!("rule for symbol '{}' uses unknown symbol {t}", alphabet[s])));
            }
        }
        let n = alphabet.len();
        let occurs: Vec<Vec<bool>> = rules
            .iter()
            .map(|img| {
                let mut row = vec![false; n];
                for &t in img {
                    row[t as usize] = true;
                }
                row
            })
            .collect();
        if !is_primitive_matrix(&occurs) {
            return Err(Error::NotPrimitive);
        }
        let sub = WordSubstitution { alphabet, rules };
        if sub.rules.iter().all(|r| r.len() == 1) {
            return Err(Error::Invalid("substitution does not expand".into()));
        }
        Ok(sub)
    }

    /// Parses rules given as strings over single-character or whitespace
    /// separated symbol names, e.g. `[("a", "ab"), ("b", "a")]`.
    pub fn from_strings(rules: &[(&str, &str)]) -> Result<Self> {
        let alphabet: Vec<String> = rules.iter().map(|(a, _)| String::from(*a)).collect();
        let imgs = rules
            .iter()
            .map(|(_, img)| parse_word(&alphabet, img))
            .collect::<Result<Vec<_>>>()?;
        WordSubstitution::new(alphabet, imgs)
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet.len()
    }

    pub fn rule(&self, s: Symbol) -> &[Symbol] {
        &self.rules[s as usize]
    }

    pub fn symbol(&self, name: &str) -> Option<Symbol> {
        self.alphabet.iter().position(|a| a == name).map(|i| i as Symbol)
    }

    pub fn to_block(&self) -> Option<BlockSubstitution> {
        let q = self.rules[0].len();
        if self.rules.iter().any(|r| r.len() != q) {
            return None;
        }
        BlockSubstitution::new(self.alphabet.clone(), vec![q], self.rules.clone()).ok()
    }

    /// One step; cells left of the origin map left of the origin.
    pub fn apply(&self, config: &Configuration) -> Result<Configuration> {
        if config.dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, found: config.dim() });
        }
        let neg = (-config.offset().coord(0)) as usize;
        let mut cells = Vec::new();
        let mut left = 0usize;
        for (i, &s) in config.cells().iter().enumerate() {
            if i == neg {
                left = cells.len();
            }
            cells.extend_from_slice(&self.rules[s as usize]);
            if cells.len() > (1usize << 31) {
                return Err(Error::Overflow);
            }
        }
        Configuration::new(vec![cells.len()], Point::from1(-(left as i64)), cells)
    }

    pub fn expand(&self, seed: Symbol, iterations: u32) -> Result<Configuration> {
        if seed as usize >= self.alphabet.len() {
            return Err(Error::Invalid(format!("symbol {seed} outside alphabet")));
        }
        let mut c = Configuration::new(vec![1], Point::from1(0), vec![seed])?;
        for _ in 0..iterations {
            c = self.apply(&c)?;
        }
        Ok(c)
    }

    pub fn power(&self, p: u32) -> Result<WordSubstitution> {
        if p == 0 {
            return Err(Error::Invalid("power must be positive".into()));
        }
        let rules = (0..self.alphabet.len() as Symbol)
            .map(|s| self.expand(s, p).map(|c| c.cells().to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Ok(WordSubstitution { alphabet: self.alphabet.clone(), rules })
    }

    fn first(&self, s: Symbol) -> Symbol {
        self.rules[s as usize][0]
    }

    fn last(&self, s: Symbol) -> Symbol {
        *self.rules[s as usize].last().expect("nonempty rule")
    }

    fn iterate(&self, mut s: Symbol, p: usize, f: impl Fn(&Self, Symbol) -> Symbol) -> Symbol {
        for _ in 0..p {
            s = f(self, s);
        }
        s
    }

    /// First letter of the image after `n` steps.
    pub fn first_after(&self, s: Symbol, n: usize) -> Symbol {
        self.iterate(s, n, Self::first)
    }

    /// Last letter of the image after `n` steps.
    pub fn last_after(&self, s: Symbol, n: usize) -> Symbol {
        self.iterate(s, n, Self::last)
    }

    pub fn fixed_point_seed(&self) -> Result<(Symbol, u32)> {
        let n = self.alphabet.len();
        for p in 1..=n {
            for s in 0..n as Symbol {
                if self.first_after(s, p) == s {
                    return Ok((s, p as u32));
                }
            }
        }
        Err(Error::NoFixedPointSeed(n))
    }

    /// Two-letter words occurring in some iterate of a letter.
    pub fn legal_pairs(&self) -> BTreeSet<[Symbol; 2]> {
        let mut legal = BTreeSet::new();
        let mut queue = VecDeque::new();
        let push = |w: &[Symbol], legal: &mut BTreeSet<[Symbol; 2]>, queue: &mut VecDeque<[Symbol; 2]>| {
            for pair in w.windows(2) {
                let pair = [pair[0], pair[1]];
                if legal.insert(pair) {
                    queue.push_back(pair);
                }
            }
        };
        for r in &self.rules {
            push(r, &mut legal, &mut queue);
        }
        if legal.is_empty() {
            // every image is a single letter for some symbols; iterate once more
            for s in 0..self.alphabet.len() as Symbol {
                if let Ok(c) = self.expand(s, self.alphabet.len() as u32 + 1) {
                    push(c.cells(), &mut legal, &mut queue);
                }
            }
        }
        while let Some([a, b]) = queue.pop_front() {
            let mut w = self.rules[a as usize].clone();
            w.extend_from_slice(&self.rules[b as usize]);
            push(&w, &mut legal, &mut queue);
        }
        legal
    }

    /// A legal pair `(left, right)` placed on `{-1, 0}` whose letters are
    /// fixed by the last-letter and first-letter maps of some power `p`.
    pub fn two_sided_seed(&self) -> Result<(Configuration, u32)> {
        let legal = self.legal_pairs();
        for p in 1..=legal.len().max(1) {
            for &[l, r] in &legal {
                if self.last_after(l, p) == l && self.first_after(r, p) == r {
                    return Ok((Configuration::new(vec![2], Point::from1(-1), vec![l, r])?, p as u32));
                }
            }
        }
        Err(Error::NoFixedPointSeed(self.alphabet.len()))
    }

    /// `|sigma^n(s)|`.
    pub fn image_length(&self, s: Symbol, n: u32) -> Result<u64> {
        let m = self.alphabet.len();
        let mut lens = vec![1u64; m];
        for _ in 0..n {
            lens = self
                .rules
                .iter()
                .map(|r| r.iter().try_fold(0u64, |acc, &t| acc.checked_add(lens[t as usize])).ok_or(Error::Overflow))
                .collect::<Result<Vec<_>>>()?;
        }
        Ok(lens[s as usize])
    }
}

/// Splits a word into symbols: whitespace separated names, or single
/// characters when there is no whitespace.
pub fn parse_word(alphabet: &[String], word: &str) -> Result<Vec<Symbol>> {
    let lookup = |name: &str| -> Result<Symbol> {
        alphabet
            .iter()
            .position(|a| a == name)
            .map(|i| i as Symbol)
            .ok_or_else(|| Error::Parse(format!("unknown symbol '{name}' in '{word}'")))
    };
    if word.split_whitespace().count() > 1 {
        word.split_whitespace().map(lookup).collect()
    } else {
        let mut buf = [0u8; 4];
        word.trim().chars().map(|c| lookup(c.encode_utf8(&mut buf))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn names(s: &str) -> Vec<String> {
        s.chars().map(|c| c.to_string()).collect()
    }

    fn period_doubling() -> BlockSubstitution {
        BlockSubstitution::new(names("ab"), vec![2], vec![vec![0, 1], vec![0, 0]]).unwrap()
    }

    fn word(c: &Configuration) -> String {
        c.cells().iter().map(|&s| (b'a' + s as u8) as char).collect()
    }

    #[test]
    fn period_doubling_expansion() {
        let pd = period_doubling();
        assert_eq!(word(&pd.expand_fixed(0, 3).unwrap()), "abaaabab");
        assert_eq!(pd.fixed_point_seed().unwrap(), (0, 1));
    }

    #[test]
    fn single_letter_rule() {
        let s = BlockSubstitution::new(names("a"), vec![2], vec![vec![0, 0]]).unwrap();
        for k in 0..6 {
            let c = s.expand(0, k).unwrap();
            assert_eq!(c.cells().len(), 1 << k);
            assert!(c.cells().iter().all(|&x| x == 0));
        }
        assert_eq!(s.fixed_point_seed().unwrap(), (0, 1));
    }

    #[test]
    fn square_power_seed() {
        let s = BlockSubstitution::new(names("ab"), vec![2], vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(s.fixed_point_seed().unwrap(), (0, 2));
        assert!(s.expand_fixed(0, 2).is_err());
        let sq = s.power(2).unwrap();
        assert_eq!(word(&sq.expand_fixed(0, 1).unwrap()), "abba");
    }

    #[test]
    fn two_dim_expansion_matches_direct_iteration() {
        // a -> [a b; b a], b -> [b b; a b]
        let s = BlockSubstitution::new(names("ab"), vec![2, 2], vec![vec![0, 1, 1, 0], vec![1, 1, 0, 1]]).unwrap();
        let c = s.expand(0, 2).unwrap();
        assert_eq!(c.shape(), &[4, 4]);
        // oracle: cell (x, y) of sigma^2(a) is rule(rule(a)[x/2, y/2])[x%2, y%2]
        for x in 0..4i64 {
            for y in 0..4i64 {
                let outer = s.rule(0)[(x / 2 * 2 + y / 2) as usize];
                let inner = s.rule(outer)[(x % 2 * 2 + y % 2) as usize];
                assert_eq!(c.get(&Point::from2(x, y)), Some(inner));
            }
        }
    }

    #[test]
    fn rejects_bad_rules() {
        assert!(matches!(
            BlockSubstitution::new(names("ab"), vec![2], vec![vec![0, 0], vec![1, 1]]),
            Err(Error::NotPrimitive)
        ));
        let e = BlockSubstitution::new(names("ab"), vec![2], vec![vec![0, 1], vec![0]]).unwrap_err();
        assert!(format!("{e}").contains("'b'"));
        assert!(BlockSubstitution::new(names("a"), vec![1], vec![vec![0]]).is_err());
    }

    #[test]
    fn two_sided_period_doubling() {
        let pd = period_doubling();
        let (seed, p) = pd.two_sided_seed().unwrap();
        assert_eq!(p, 2);
        let mut c = seed.clone();
        for _ in 0..4 {
            c = pd.apply(&c).unwrap();
        }
        // right half is the one-sided fixed point
        let right = pd.expand_fixed(0, 4).unwrap();
        for i in 0..16 {
            assert_eq!(c.get(&Point::from1(i)), right.get(&Point::from1(i)));
        }
        // the seed block is legal
        assert!(pd.legal_blocks().contains(&seed.cells().to_vec()));
    }

    #[test]
    fn fibonacci_words() {
        let f = WordSubstitution::from_strings(&[("a", "ab"), ("b", "a")]).unwrap();
        assert_eq!(word(&f.expand(0, 5).unwrap()), "abaababaabaab");
        assert_eq!(f.image_length(0, 5).unwrap(), 13);
        assert_eq!(f.fixed_point_seed().unwrap(), (0, 1));
        let pairs: Vec<[Symbol; 2]> = f.legal_pairs().into_iter().collect();
        assert_eq!(pairs, vec![[0, 0], [0, 1], [1, 0]]);
        let (seed, p) = f.two_sided_seed().unwrap();
        assert_eq!(p, 2);
        let mut c = seed;
        for _ in 0..6 {
            c = f.apply(&c).unwrap();
        }
        let right = f.expand(0, 6).unwrap();
        for (i, &s) in right.cells().iter().enumerate() {
            assert_eq!(c.get(&Point::from1(i as i64)), Some(s));
        }
    }

    #[test]
    fn word_to_block() {
        let f = WordSubstitution::from_strings(&[("a", "ab"), ("b", "aa")]).unwrap();
        assert_eq!(f.to_block().unwrap(), period_doubling());
        let g = WordSubstitution::from_strings(&[("a", "ab"), ("b", "a")]).unwrap();
        assert!(g.to_block().is_none());
    }
}
