//! One-sided subshifts of finite type: the ambient space, the left-shift
//! dynamics, eventually periodic points, and locally constant potentials
//! with their Birkhoff sums.
//!
//! The base metric is `d(x, y) = 2^{-i}` where `i` is the first index at
//! which the sequences disagree; the Bowen distance maximizes `d` along the
//! first `n` shifts. Points are stored as `preperiod · period^∞`, which is
//! dense in the shift space and gives every construction here an exact
//! finite representation.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::num::{flt, Real};

/// A finite word over the alphabet `{0, .., k-1}`, one symbol per byte.
pub type Word = Vec<u8>;

const WORD_CHARSET: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// Largest supported alphabet (symbols render as `0-9a-z`).
pub const MAX_ALPHABET: usize = WORD_CHARSET.len();

/// Render a word with one character per symbol (`0-9a-z`).
pub fn format_word(w: &[u8]) -> String {
    w.iter().map(|&s| WORD_CHARSET[s as usize] as char).collect()
}

/// Parse a word from its `0-9a-z` rendering.
pub fn parse_word(s: &str) -> Result<Word> {
    s.chars()
        .map(|c| match c {
            '0'..='9' => Ok(c as u8 - b'0'),
            'a'..='z' => Ok(c as u8 - b'a' + 10),
            _ => Err(Error::InvalidPoint(format!("bad symbol character {c:?}"))),
        })
        .collect()
}

/// A subshift of finite type: alphabet size `k` and a primitive 0/1
/// transition table. `table[a][b] = 1` allows the symbol `b` to follow `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubshiftSystem {
    k: usize,
    table: Vec<bool>,
}

impl SubshiftSystem {
    /// Build a system from a 0/1 transition table, validating alphabet
    /// size, row/column support, and primitivity (some power of the table,
    /// checked up to the k² bound, is entrywise positive).
    pub fn new(k: usize, rows: &[Vec<u8>]) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidSystem(format!("alphabet size {k} < 2")));
        }
        if k > MAX_ALPHABET {
            return Err(Error::InvalidSystem(format!(
                "alphabet size {k} exceeds {MAX_ALPHABET}"
            )));
        }
        if rows.len() != k || rows.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidSystem(format!(
                "transition table is not {k}x{k}"
            )));
        }
        let mut table = vec![false; k * k];
        for (a, row) in rows.iter().enumerate() {
            for (b, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => table[a * k + b] = true,
                    other => {
                        return Err(Error::InvalidSystem(format!(
                            "table entry ({a},{b}) = {other}, expected 0 or 1"
                        )))
                    }
                }
            }
        }
        for a in 0..k {
            if !(0..k).any(|b| table[a * k + b]) {
                return Err(Error::InvalidSystem(format!("row {a} has no 1")));
            }
            if !(0..k).any(|b| table[b * k + a]) {
                return Err(Error::InvalidSystem(format!("column {a} has no 1")));
            }
        }
        let sys = SubshiftSystem { k, table };
        if !sys.is_primitive() {
            return Err(Error::InvalidSystem(
                "transition table is not primitive (no power up to k² is entrywise positive)"
                    .into(),
            ));
        }
        Ok(sys)
    }

    /// The unconstrained shift on `k` symbols.
    pub fn full_shift(k: usize) -> Self {
        SubshiftSystem::new(k, &vec![vec![1; k]; k]).expect("full shift is primitive")
    }

    /// Decide primitivity by repeated boolean squaring: the table is
    /// primitive iff its 2^j-th power is entrywise positive once 2^j ≥ k².
    fn is_primitive(&self) -> bool {
        let k = self.k;
        let mut power = self.table.clone();
        let mut exponent = 1usize;
        loop {
            if power.iter().all(|&x| x) {
                return true;
            }
            if exponent >= k * k {
                return false;
            }
            let mut sq = vec![false; k * k];
            for i in 0..k {
                for l in 0..k {
                    if power[i * k + l] {
                        for j in 0..k {
                            if power[l * k + j] {
                                sq[i * k + j] = true;
                            }
                        }
                    }
                }
            }
            power = sq;
            exponent *= 2;
        }
    }

    pub fn alphabet_size(&self) -> usize {
        self.k
    }

    /// Whether symbol `b` may follow symbol `a`.
    #[inline]
    pub fn allows(&self, a: u8, b: u8) -> bool {
        self.table[a as usize * self.k + b as usize]
    }

    /// Whether every adjacent pair of `w` is allowed.
    pub fn is_admissible(&self, w: &[u8]) -> bool {
        w.iter().all(|&a| (a as usize) < self.k)
            && w.windows(2).all(|p| self.allows(p[0], p[1]))
    }

    /// All admissible words of length `n`, in lexicographic order.
    pub fn admissible_words(&self, n: usize) -> Vec<Word> {
        assert!(n >= 1, "word length must be at least 1");
        let mut out = Vec::new();
        let mut stack: Word = Vec::with_capacity(n);
        self.extend_words(&mut stack, n, &mut out);
        out
    }

    fn extend_words(&self, stack: &mut Word, n: usize, out: &mut Vec<Word>) {
        if stack.len() == n {
            out.push(stack.clone());
            return;
        }
        for b in 0..self.k as u8 {
            if stack.last().map_or(true, |&a| self.allows(a, b)) {
                stack.push(b);
                self.extend_words(stack, n, out);
                stack.pop();
            }
        }
    }

    /// Validated construction of an eventually periodic point.
    pub fn point(&self, preperiod: &[u8], period: &[u8]) -> Result<SymbolicPoint> {
        if period.is_empty() {
            return Err(Error::InvalidPoint("empty period".into()));
        }
        let all_small = preperiod
            .iter()
            .chain(period)
            .all(|&s| (s as usize) < self.k);
        if !all_small {
            return Err(Error::InvalidPoint("symbol outside alphabet".into()));
        }
        let pt = SymbolicPoint {
            preperiod: preperiod.to_vec(),
            period: period.to_vec(),
        };
        // Admissibility of the full sequence: preperiod interior, the
        // junction, the period interior, and the period wrap.
        let horizon = preperiod.len() + period.len();
        for i in 0..horizon {
            let (a, b) = (pt.symbol(i), pt.symbol(i + 1));
            if !self.allows(a, b) {
                return Err(Error::InvalidPoint(format!(
                    "forbidden pair ({a},{b}) at index {i}"
                )));
            }
        }
        Ok(pt)
    }

    /// Extend an admissible word to a genuine point of the shift space:
    /// the periodic point `w^∞` when the wrap pair is allowed, otherwise
    /// `w · c^∞` where `c` is the first admissible continuation cycle in
    /// (length, lexicographic) order, of length at most `k`.
    ///
    /// Panics if `w` is empty or inadmissible.
    pub fn canonical_extension(&self, w: &[u8]) -> SymbolicPoint {
        assert!(!w.is_empty(), "cannot extend the empty word");
        assert!(self.is_admissible(w), "inadmissible word {}", format_word(w));
        let last = *w.last().unwrap();
        if self.allows(last, w[0]) {
            return SymbolicPoint {
                preperiod: Vec::new(),
                period: w.to_vec(),
            };
        }
        let cycle = self
            .least_continuation_cycle(last)
            .expect("primitivity guarantees a continuation cycle of length <= k");
        SymbolicPoint {
            preperiod: w.to_vec(),
            period: cycle,
        }
    }

    /// First cycle, in (length, lexicographic) order, that may follow the
    /// symbol `after`. Searches lengths 1..=k with reachability pruning.
    fn least_continuation_cycle(&self, after: u8) -> Option<Word> {
        // reach[t][a][b]: a path of exactly t edges leads from a to b.
        let k = self.k;
        let mut reach = vec![self.table.clone()];
        for _ in 1..k {
            let prev = reach.last().unwrap();
            let mut next = vec![false; k * k];
            for i in 0..k {
                for l in 0..k {
                    if prev[i * k + l] {
                        for j in 0..k {
                            if self.table[l * k + j] {
                                next[i * k + j] = true;
                            }
                        }
                    }
                }
            }
            reach.push(next);
        }
        let step_reach = |steps: usize, a: usize, b: usize| reach[steps - 1][a * k + b];
        for len in 1..=k {
            let mut cycle: Word = Vec::with_capacity(len);
            if self.least_cycle_dfs(after, len, &mut cycle, &step_reach) {
                return Some(cycle);
            }
        }
        None
    }

    fn least_cycle_dfs(
        &self,
        after: u8,
        len: usize,
        cycle: &mut Word,
        step_reach: &impl Fn(usize, usize, usize) -> bool,
    ) -> bool {
        if cycle.len() == len {
            return self.allows(*cycle.last().unwrap(), cycle[0]);
        }
        let prev = *cycle.last().unwrap_or(&after);
        for b in 0..self.k as u8 {
            if !self.allows(prev, b) {
                continue;
            }
            // Prune: from b we must close back to the cycle start in the
            // remaining steps (start is b itself when the cycle is empty).
            let start = *cycle.first().unwrap_or(&b);
            let remaining = len - cycle.len();
            let closable = if remaining == 1 {
                self.allows(b, start)
            } else {
                step_reach(remaining, b as usize, start as usize)
            };
            if !closable {
                continue;
            }
            cycle.push(b);
            if self.least_cycle_dfs(after, len, cycle, step_reach) {
                return true;
            }
            cycle.pop();
        }
        false
    }

    /// All points of period dividing `n`: the admissible cyclic words of
    /// length `n`, in lexicographic order. Their count equals `tr(Aⁿ)`.
    pub fn periodic_points(&self, n: usize) -> Vec<SymbolicPoint> {
        self.admissible_words(n)
            .into_iter()
            .filter(|w| self.allows(*w.last().unwrap(), w[0]))
            .map(|w| SymbolicPoint {
                preperiod: Vec::new(),
                period: w,
            })
            .collect()
    }
}

/// An eventually periodic point `preperiod · period^∞` of a subshift.
///
/// Derived equality and ordering compare representations; use
/// [`SymbolicPoint::same_sequence`] for equality as infinite sequences.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SymbolicPoint {
    preperiod: Word,
    period: Word,
}

/// Coordinates inspected by the Bowen distance beyond the horizon `n`;
/// disagreements deeper than this are settled through normal forms.
const BOWEN_WINDOW_SLACK: usize = 64;

impl SymbolicPoint {
    pub fn preperiod(&self) -> &[u8] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u8] {
        &self.period
    }

    /// Symbol at coordinate `i` of the infinite sequence.
    #[inline]
    pub fn symbol(&self, i: usize) -> u8 {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    /// The point `T^j x` (drop the first `j` symbols).
    pub fn shifted(&self, j: usize) -> SymbolicPoint {
        if j < self.preperiod.len() {
            SymbolicPoint {
                preperiod: self.preperiod[j..].to_vec(),
                period: self.period.clone(),
            }
        } else {
            let r = (j - self.preperiod.len()) % self.period.len();
            let mut period = self.period[r..].to_vec();
            period.extend_from_slice(&self.period[..r]);
            SymbolicPoint {
                preperiod: Vec::new(),
                period,
            }
        }
    }

    /// Canonical representation: shortest preperiod, primitive period.
    /// Two points are equal as sequences iff their normal forms are equal.
    pub fn normal_form(&self) -> SymbolicPoint {
        let mut period = primitive_root(&self.period);
        let mut preperiod = self.preperiod.clone();
        // u·a (v'·a)^∞ = u (a·v')^∞: absorb trailing preperiod symbols by
        // rotating the period right.
        while let (Some(&pa), Some(&va)) = (preperiod.last(), period.last()) {
            if pa != va {
                break;
            }
            preperiod.pop();
            period.pop();
            period.insert(0, va);
        }
        SymbolicPoint { preperiod, period }
    }

    /// Equality as infinite sequences.
    pub fn same_sequence(&self, other: &SymbolicPoint) -> bool {
        self.normal_form() == other.normal_form()
    }

    fn first_disagreement(&self, other: &SymbolicPoint, limit: usize) -> Option<usize> {
        (0..=limit).find(|&i| self.symbol(i) != other.symbol(i))
    }

    /// Bowen distance `max_{0≤j<n} d(T^j x, T^j y)` for the base metric
    /// `d = 2^{-first disagreement}`.
    ///
    /// Coordinates up to `n + 64` are inspected directly; pairs that agree
    /// on that whole window are resolved by normal form: `0` when equal as
    /// sequences, and the upper bound `2^{-66}` of the remaining range
    /// otherwise.
    pub fn bowen_distance<T: Real>(&self, other: &SymbolicPoint, n: usize) -> T {
        assert!(n >= 1, "horizon must be at least 1");
        let limit = n + BOWEN_WINDOW_SLACK;
        match self.first_disagreement(other, limit) {
            Some(m) if m < n => T::one(),
            // d_n = 2^{n-1-m}: the max is attained at shift j = n-1.
            Some(m) => flt::<T>((n as f64) - 1.0 - (m as f64)).exp2(),
            None => {
                if self.same_sequence(other) {
                    T::zero()
                } else {
                    flt::<T>(-(BOWEN_WINDOW_SLACK as f64) - 2.0).exp2()
                }
            }
        }
    }
}

impl fmt::Display for SymbolicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}({})",
            format_word(&self.preperiod),
            format_word(&self.period)
        )
    }
}

/// Shortest word `p` with `w = p^(|w|/|p|)`.
fn primitive_root(w: &[u8]) -> Word {
    let n = w.len();
    for p in 1..=n {
        if n % p == 0 && (p..n).all(|i| w[i] == w[i - p]) {
            return w[..p].to_vec();
        }
    }
    w.to_vec()
}

/// A potential depending on the first `depth` symbols, tabulated over the
/// admissible words of that length.
#[derive(Debug, Clone, PartialEq)]
pub struct LocallyConstantPotential<T> {
    depth: usize,
    values: BTreeMap<Word, T>,
}

impl<T: Real> LocallyConstantPotential<T> {
    /// Validating constructor: the table must cover exactly the admissible
    /// `depth`-words, with finite values.
    pub fn new(
        system: &SubshiftSystem,
        depth: usize,
        values: BTreeMap<Word, T>,
    ) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidPotential("depth must be at least 1".into()));
        }
        let words = system.admissible_words(depth);
        if values.len() != words.len() || words.iter().any(|w| !values.contains_key(w)) {
            return Err(Error::InvalidPotential(format!(
                "table must cover exactly the {} admissible depth-{depth} words",
                words.len()
            )));
        }
        if values.values().any(|v| !v.is_finite()) {
            return Err(Error::InvalidPotential("non-finite value".into()));
        }
        Ok(LocallyConstantPotential { depth, values })
    }

    /// Tabulate `f` over the admissible `depth`-words.
    pub fn from_fn(
        system: &SubshiftSystem,
        depth: usize,
        mut f: impl FnMut(&[u8]) -> T,
    ) -> Self {
        assert!(depth >= 1);
        let values = system
            .admissible_words(depth)
            .into_iter()
            .map(|w| {
                let v = f(&w);
                (w, v)
            })
            .collect();
        LocallyConstantPotential { depth, values }
    }

    /// The constant potential `c` (depth 1).
    pub fn constant(system: &SubshiftSystem, c: T) -> Self {
        Self::from_fn(system, 1, |_| c)
    }

    /// The zero potential (depth 1).
    pub fn zero(system: &SubshiftSystem) -> Self {
        Self::constant(system, T::zero())
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn values(&self) -> &BTreeMap<Word, T> {
        &self.values
    }

    /// Value on a window. Panics on windows outside the table (callers
    /// must supply admissible windows of the right length).
    #[inline]
    pub fn eval(&self, window: &[u8]) -> T {
        debug_assert_eq!(window.len(), self.depth);
        match self.values.get(window) {
            Some(v) => *v,
            None => panic!("window {} not in potential table", format_word(window)),
        }
    }

    /// Birkhoff sum `Σ_{j<n} f(T^j x)`, reading windows off the actual
    /// point (beyond index `n` this reaches into the periodic tail).
    pub fn birkhoff_sum(&self, x: &SymbolicPoint, n: usize) -> T {
        assert!(n >= 1);
        let mut window: Word = (0..self.depth).map(|i| x.symbol(i)).collect();
        let mut total = T::zero();
        for j in 0..n {
            total = total + self.eval(&window);
            window.rotate_left(1);
            let tail = window.len() - 1;
            window[tail] = x.symbol(j + self.depth);
        }
        total
    }

    /// Orbit average `(1/n) Σ_{j<n} f(T^j x)`.
    pub fn orbit_average(&self, x: &SymbolicPoint, n: usize) -> T {
        self.birkhoff_sum(x, n) / flt(n as f64)
    }

    /// Re-tabulate at a greater depth (values read off the leading window).
    pub fn lift(&self, system: &SubshiftSystem, depth: usize) -> Result<Self> {
        if depth < self.depth {
            return Err(Error::DepthMismatch {
                left: self.depth,
                right: depth,
            });
        }
        if depth == self.depth {
            return Ok(self.clone());
        }
        Ok(Self::from_fn(system, depth, |w| self.eval(&w[..self.depth])))
    }

    /// Pointwise sum, lifted to the common depth.
    pub fn add(&self, other: &Self, system: &SubshiftSystem) -> Self {
        let depth = self.depth.max(other.depth);
        Self::from_fn(system, depth, |w| {
            self.eval(&w[..self.depth]) + other.eval(&w[..other.depth])
        })
    }

    /// The composition with the shift, `ω∘T`, as a depth-`(m+1)` table.
    pub fn shifted(&self, system: &SubshiftSystem) -> Self {
        Self::from_fn(system, self.depth + 1, |w| self.eval(&w[1..]))
    }

    /// Scalar multiple `c·f`.
    pub fn scale(&self, c: T) -> Self {
        LocallyConstantPotential {
            depth: self.depth,
            values: self.values.iter().map(|(w, v)| (w.clone(), *v * c)).collect(),
        }
    }
}
