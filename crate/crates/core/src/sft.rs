//! Finite automaton for a lexicographic subshift: word counts, transitive
//! components, Perron data, Parry measures and the intrinsic-ergodicity test.
//!
//! A state records, for each bound, the smallest tail of `α` (largest tail of
//! `β`) that some suffix of the input still matches exactly, stored as a shift
//! offset. Reading a symbol either advances that tail, resets it to the bound
//! itself when every match has become strict, or kills the path.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::renorm::{hofbauer_check, HofbauerWitness};
use crate::seq::{require_admissible, EPSeq};

/// Deterministic automaton over `{0, 1}` recognising the language of the
/// subshift between `β` and `α`.
#[derive(Clone, Debug)]
pub struct Automaton {
    alpha: EPSeq,
    beta: EPSeq,
    states: Vec<(usize, usize)>,
    next: Vec<[Option<usize>; 2]>,
    initial: usize,
}

fn advance(x: &EPSeq, k: usize) -> usize {
    if k + 1 < x.orbit_len() {
        k + 1
    } else {
        x.pre().len()
    }
}

impl Automaton {
    /// Every state reachable from the start, including dead ends.
    pub fn untrimmed(alpha: &EPSeq, beta: &EPSeq) -> Result<Self> {
        require_admissible(alpha, beta)?;
        let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut states = vec![(0, 0)];
        let mut next: Vec<[Option<usize>; 2]> = Vec::new();
        index.insert((0, 0), 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(s) = queue.pop_front() {
            let (i, j) = states[s];
            let mut out = [None, None];
            for c in 0..2u8 {
                let a = alpha.at(i);
                let b = beta.at(j);
                if c > a || c < b {
                    continue;
                }
                let i2 = if c == a { advance(alpha, i) } else { 0 };
                let j2 = if c == b { advance(beta, j) } else { 0 };
                let t = *index.entry((i2, j2)).or_insert_with(|| {
                    states.push((i2, j2));
                    queue.push_back(states.len() - 1);
                    states.len() - 1
                });
                out[c as usize] = Some(t);
            }
            if next.len() <= s {
                next.resize(s + 1, [None, None]);
            }
            next[s] = out;
        }
        next.resize(states.len(), [None, None]);
        Ok(Automaton {
            alpha: alpha.clone(),
            beta: beta.clone(),
            states,
            next,
            initial: 0,
        })
    }

    /// Removes states with no infinite forward path.
    pub fn trim(&self) -> Automaton {
        let n = self.states.len();
        let mut alive = vec![true; n];
        loop {
            let mut changed = false;
            for s in 0..n {
                if alive[s] && !self.next[s].iter().flatten().any(|&t| alive[t]) {
                    alive[s] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut renumber = vec![usize::MAX; n];
        let mut states = Vec::new();
        for s in (0..n).filter(|&s| alive[s]) {
            renumber[s] = states.len();
            states.push(self.states[s]);
        }
        let next = (0..n)
            .filter(|&s| alive[s])
            .map(|s| {
                self.next[s].map(|t| t.filter(|&t| alive[t]).map(|t| renumber[t]))
            })
            .collect();
        Automaton {
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
            states,
            next,
            initial: renumber[self.initial],
        }
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn alpha(&self) -> &EPSeq {
        &self.alpha
    }

    pub fn beta(&self) -> &EPSeq {
        &self.beta
    }

    pub fn successor(&self, state: usize, symbol: u8) -> Option<usize> {
        self.next[state][symbol as usize]
    }

    /// `(from, symbol, to)` for every transition, in state order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, u8, usize)> + '_ {
        self.next.iter().enumerate().flat_map(|(s, out)| {
            out.iter()
                .enumerate()
                .filter_map(move |(c, t)| t.map(|t| (s, c as u8, t)))
        })
    }

    /// Human-readable name: the shift offsets into `α` and `β`.
    pub fn state_label(&self, s: usize) -> String {
        let (i, j) = self.states[s];
        alloc::format!("a{i}b{j}")
    }

    pub fn accepts(&self, word: &[u8]) -> bool {
        let mut s = self.initial;
        for &c in word {
            match self.successor(s, c) {
                Some(t) => s = t,
                None => return false,
            }
        }
        true
    }

    /// Number of labelled paths of length `n` from the start state.
    pub fn count_paths(&self, n: usize) -> BigUint {
        let mut counts = vec![BigUint::zero(); self.len()];
        counts[self.initial] = BigUint::one();
        for _ in 0..n {
            let mut nxt = vec![BigUint::zero(); self.len()];
            for (s, c) in counts.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for t in self.next[s].iter().flatten() {
                    nxt[*t] += c;
                }
            }
            counts = nxt;
        }
        counts.into_iter().sum()
    }
}

/// Trimmed automaton of an admissible pair.
pub fn build_automaton(alpha: &EPSeq, beta: &EPSeq) -> Result<Automaton> {
    Ok(Automaton::untrimmed(alpha, beta)?.trim())
}

/// `|B_n|`: words of length `n` none of whose suffixes violates
/// `β-prefix ≼ suffix ≼ α-prefix`.
pub fn count_words(alpha: &EPSeq, beta: &EPSeq, n: usize) -> Result<BigUint> {
    Ok(Automaton::untrimmed(alpha, beta)?.count_paths(n))
}

/// `|B_n|` by depth-first enumeration, checking each suffix against the bounds
/// directly. Exponential in `n`; meant as an independent check.
pub fn count_words_enumerative(alpha: &EPSeq, beta: &EPSeq, n: usize) -> Result<u64> {
    require_admissible(alpha, beta)?;
    fn go(alpha: &EPSeq, beta: &EPSeq, left: usize, upper: &[usize], lower: &[usize]) -> u64 {
        if left == 0 {
            return 1;
        }
        let mut total = 0;
        'symbol: for c in 0..2u8 {
            let mut up = Vec::with_capacity(upper.len() + 1);
            let mut lo = Vec::with_capacity(lower.len() + 1);
            // Offsets of suffixes still equal to a prefix of the bound, plus
            // the suffix starting at this symbol.
            for &k in upper.iter().chain(core::iter::once(&0)) {
                let a = alpha.at(k);
                if c > a {
                    continue 'symbol;
                }
                if c == a {
                    up.push(k + 1);
                }
            }
            for &k in lower.iter().chain(core::iter::once(&0)) {
                let b = beta.at(k);
                if c < b {
                    continue 'symbol;
                }
                if c == b {
                    lo.push(k + 1);
                }
            }
            total += go(alpha, beta, left - 1, &up, &lo);
        }
        total
    }
    Ok(go(alpha, beta, n, &[], &[]))
}

/// One transitive component: a strongly connected set of states with at least
/// one internal edge.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentReport {
    pub id: usize,
    pub states: Vec<usize>,
    pub perron_entropy_bits: f64,
    /// Certified enclosure of the spectral radius.
    pub radius_bounds: (f64, f64),
    pub is_trivial_cycle: bool,
}

/// Strongly connected components, each sorted, listed in discovery order.
fn tarjan(a: &Automaton) -> Vec<Vec<usize>> {
    let n = a.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut out = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // Explicit call stack of (vertex, next edge slot).
        let mut calls = vec![(root, 0usize)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut slot)) = calls.last_mut() {
            if *slot < 2 {
                let e = *slot;
                *slot += 1;
                if let Some(w) = a.next[v][e] {
                    if index[w] == usize::MAX {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        calls.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                }
                continue;
            }
            calls.pop();
            if let Some(&(u, _)) = calls.last() {
                low[u] = low[u].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comp.sort_unstable();
                out.push(comp);
            }
        }
    }
    out
}

/// Perron data of a non-negative irreducible matrix.
struct Perron {
    radius: f64,
    bounds: (f64, f64),
    right: Vec<f64>,
    left: Vec<f64>,
}

fn mat_vec(m: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

fn transpose(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    (0..n).map(|j| (0..n).map(|i| m[i][j]).collect()).collect()
}

fn normalise(v: &mut [f64]) {
    let s: f64 = v.iter().sum();
    if s > 0.0 {
        v.iter_mut().for_each(|x| *x /= s);
    }
}

/// Positive eigenvector of `m` for its spectral radius. Iterates with
/// `I + m`, which is primitive, first by repeated squaring (fast for small
/// matrices) and then by plain power steps until the Collatz–Wielandt
/// bounds meet.
fn perron_vector(m: &[Vec<f64>]) -> (Vec<f64>, (f64, f64)) {
    let n = m.len();
    let shifted: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| m[i][j] + if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let mut v = vec![1.0; n];
    if n <= 128 {
        let mut p = shifted.clone();
        for _ in 0..64 {
            let mut sq = vec![vec![0.0; n]; n];
            for (row, out) in p.iter().zip(sq.iter_mut()) {
                for (&a, next) in row.iter().zip(&p) {
                    if a == 0.0 {
                        continue;
                    }
                    for (o, &b) in out.iter_mut().zip(next) {
                        *o += a * b;
                    }
                }
            }
            let top = sq.iter().flatten().fold(0.0f64, |a, &b| a.max(b));
            sq.iter_mut().flatten().for_each(|x| *x /= top);
            let mut w = mat_vec(&sq, &vec![1.0; n]);
            normalise(&mut w);
            let done = w.iter().zip(&v).all(|(a, b)| (a - b).abs() <= 1e-16 * n as f64);
            v = w;
            p = sq;
            if done {
                break;
            }
        }
    }
    let bounds = |v: &[f64]| {
        let mv = mat_vec(m, v);
        mv.iter().zip(v).fold((f64::INFINITY, 0.0f64), |(lo, hi), (a, b)| {
            let r = a / b;
            (lo.min(r), hi.max(r))
        })
    };
    let mut b = bounds(&v);
    for _ in 0..200_000 {
        if b.1 - b.0 <= 1e-13 * b.1.max(1.0) {
            break;
        }
        v = mat_vec(&shifted, &v);
        normalise(&mut v);
        b = bounds(&v);
    }
    (v, b)
}

fn perron(m: &[Vec<f64>]) -> Perron {
    let (right, bounds) = perron_vector(m);
    let (left, _) = perron_vector(&transpose(m));
    Perron {
        radius: 0.5 * (bounds.0 + bounds.1),
        bounds,
        right,
        left,
    }
}

struct Component {
    states: Vec<usize>,
    matrix: Vec<Vec<f64>>,
    trivial: bool,
}

fn raw_components(a: &Automaton) -> Vec<Component> {
    tarjan(a)
        .into_iter()
        .filter_map(|states| {
            let local: BTreeMap<usize, usize> =
                states.iter().enumerate().map(|(k, &s)| (s, k)).collect();
            let n = states.len();
            let mut matrix = vec![vec![0.0; n]; n];
            let mut out_degree = vec![0; n];
            let mut edges = 0;
            for (k, &s) in states.iter().enumerate() {
                for t in a.next[s].iter().flatten() {
                    if let Some(&l) = local.get(t) {
                        matrix[k][l] += 1.0;
                        out_degree[k] += 1;
                        edges += 1;
                    }
                }
            }
            (edges > 0).then(|| Component {
                trivial: out_degree.iter().all(|&d| d == 1),
                states,
                matrix,
            })
        })
        .collect()
}

fn analyse(a: &Automaton) -> Vec<(ComponentReport, Component, Option<Perron>)> {
    let mut out: Vec<_> = raw_components(a)
        .into_iter()
        .map(|c| {
            let (entropy, bounds, p) = if c.trivial {
                (0.0, (1.0, 1.0), None)
            } else {
                let p = perron(&c.matrix);
                (libm::log2(p.radius).max(0.0), p.bounds, Some(p))
            };
            let report = ComponentReport {
                id: 0,
                states: c.states.clone(),
                perron_entropy_bits: entropy,
                radius_bounds: bounds,
                is_trivial_cycle: c.trivial,
            };
            (report, c, p)
        })
        .collect();
    out.sort_by(|x, y| {
        y.0.perron_entropy_bits
            .total_cmp(&x.0.perron_entropy_bits)
            .then_with(|| x.0.states.cmp(&y.0.states))
    });
    for (k, item) in out.iter_mut().enumerate() {
        item.0.id = k;
    }
    out
}

/// Transitive components sorted by entropy, largest first; `id` is the rank.
pub fn components(a: &Automaton) -> Vec<ComponentReport> {
    analyse(a).into_iter().map(|(r, _, _)| r).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasureEdge {
    pub from: usize,
    pub symbol: u8,
    pub to: usize,
    pub probability: f64,
}

/// The maximal-entropy Markov measure on one component.
#[derive(Clone, Debug, PartialEq)]
pub struct MaxEntropyMeasure {
    pub component: usize,
    pub states: Vec<usize>,
    /// Stationary weight of each entry of `states`.
    pub stationary: Vec<f64>,
    pub edges: Vec<MeasureEdge>,
    pub entropy_bits: f64,
    pub perron_entropy_bits: f64,
}

impl MaxEntropyMeasure {
    /// Largest deviation of `πP` from `π`.
    pub fn stationarity_defect(&self) -> f64 {
        let pos: BTreeMap<usize, usize> =
            self.states.iter().enumerate().map(|(k, &s)| (s, k)).collect();
        let mut image = vec![0.0; self.states.len()];
        for e in &self.edges {
            image[pos[&e.to]] += self.stationary[pos[&e.from]] * e.probability;
        }
        image
            .iter()
            .zip(&self.stationary)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Largest deviation of an out-probability sum from 1.
    pub fn row_sum_defect(&self) -> f64 {
        let mut sums: BTreeMap<usize, f64> = BTreeMap::new();
        for e in &self.edges {
            *sums.entry(e.from).or_default() += e.probability;
        }
        sums.values().fold(0.0f64, |m, s| m.max((s - 1.0).abs()))
    }
}

/// Parry measure on component `id` (as numbered by [`components`]).
pub fn parry_measure(a: &Automaton, id: usize) -> Result<MaxEntropyMeasure> {
    let all = analyse(a);
    let (report, comp, p) = all.into_iter().nth(id).ok_or(Error::NoSuchComponent(id))?;
    let (radius, right, left) = match p {
        Some(p) => (p.radius, p.right, p.left),
        None => {
            let n = comp.states.len();
            (1.0, vec![1.0; n], vec![1.0; n])
        }
    };
    let local: BTreeMap<usize, usize> =
        comp.states.iter().enumerate().map(|(k, &s)| (s, k)).collect();
    let mut edges = Vec::new();
    for (k, &s) in comp.states.iter().enumerate() {
        for c in 0..2u8 {
            if let Some(t) = a.successor(s, c) {
                if let Some(&l) = local.get(&t) {
                    edges.push(MeasureEdge {
                        from: s,
                        symbol: c,
                        to: t,
                        probability: right[l] / (radius * right[k]),
                    });
                }
            }
        }
    }
    let mut stationary: Vec<f64> = left.iter().zip(&right).map(|(a, b)| a * b).collect();
    normalise(&mut stationary);
    let mut entropy = 0.0;
    for e in &edges {
        let pi = stationary[local[&e.from]];
        if e.probability > 0.0 {
            entropy -= pi * e.probability * libm::log2(e.probability);
        }
    }
    Ok(MaxEntropyMeasure {
        component: report.id,
        states: comp.states,
        stationary,
        edges,
        entropy_bits: entropy,
        perron_entropy_bits: report.perron_entropy_bits,
    })
}

/// Entropy tolerance for deciding ties between components.
pub const TIE_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub enum IeVerdict {
    IntrinsicallyErgodic {
        component: usize,
        measure: MaxEntropyMeasure,
    },
    NotIntrinsicallyErgodic {
        components: (usize, usize),
        witness: HofbauerWitness,
    },
    ZeroEntropy,
    TieWithinTolerance {
        components: Vec<usize>,
    },
}

impl IeVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            IeVerdict::IntrinsicallyErgodic { .. } => "IntrinsicallyErgodic",
            IeVerdict::NotIntrinsicallyErgodic { .. } => "NotIntrinsicallyErgodic",
            IeVerdict::ZeroEntropy => "ZeroEntropy",
            IeVerdict::TieWithinTolerance { .. } => "TieWithinTolerance",
        }
    }
}

/// Unique maximal component with positive entropy ⇒ intrinsically ergodic; a
/// tie is reported as non-ergodic only with a symbolic family witness.
pub fn ie_verdict(alpha: &EPSeq, beta: &EPSeq) -> Result<IeVerdict> {
    let a = build_automaton(alpha, beta)?;
    let comps = components(&a);
    let Some(top) = comps.first() else {
        return Ok(IeVerdict::ZeroEntropy);
    };
    if top.perron_entropy_bits <= TIE_TOL {
        return Ok(IeVerdict::ZeroEntropy);
    }
    let tied: Vec<usize> = comps
        .iter()
        .filter(|c| c.perron_entropy_bits >= top.perron_entropy_bits - TIE_TOL)
        .map(|c| c.id)
        .collect();
    if tied.len() == 1 {
        return Ok(IeVerdict::IntrinsicallyErgodic {
            component: top.id,
            measure: parry_measure(&a, top.id)?,
        });
    }
    match hofbauer_check(alpha, beta) {
        Some(witness) => Ok(IeVerdict::NotIntrinsicallyErgodic {
            components: (tied[0], tied[1]),
            witness,
        }),
        None => Ok(IeVerdict::TieWithinTolerance { components: tied }),
    }
}
