//! Finite sweeps over windows of an ambient group: the monochromatic-triple
//! check, the coset-uniqueness check and the order-4 obstruction demo.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::colouring::{is_halvable, Colour};
use crate::group::{AmbientElement, AmbientSignature, FreeMode, Order, PruferCoord};
use crate::sumset::FiniteGroupSpec;

pub const DEFAULT_CAP: usize = 100_000;
pub const DEFAULT_VIOLATION_LIMIT: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("sample would hold {size} elements, above the cap of {cap}")]
    CapExceeded { size: u128, cap: usize },
    #[error("sample bounds must be positive ({0})")]
    BadBounds(&'static str),
    #[error("could not build worker pool: {0}")]
    Pool(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum SampleMode {
    Exhaustive,
    Random { count: usize, seed: u64 },
}

/// A finite window onto the ambient group: Prüfer coordinates with
/// denominator at most `p^prufer_depth`, free coordinates `n/m` with
/// `|n| ≤ q_numerator_bound` and `1 ≤ m ≤ q_denominator_bound` (the
/// denominator bound is ignored in integer mode), and every bit vector.
#[derive(Clone, Debug)]
pub struct SampleSpec {
    pub signature: Arc<AmbientSignature>,
    pub prufer_depth: u32,
    pub q_numerator_bound: u64,
    pub q_denominator_bound: u64,
    pub mode: SampleMode,
    pub cap: usize,
}

/// Serializable echo of a [`SampleSpec`].
#[derive(Clone, Debug, Serialize)]
pub struct SampleDescription {
    pub signature: String,
    pub prufer_depth: u32,
    pub q_numerator_bound: u64,
    pub q_denominator_bound: u64,
    #[serde(flatten)]
    pub mode: SampleMode,
    pub cap: usize,
}

impl SampleSpec {
    pub fn exhaustive(signature: Arc<AmbientSignature>, prufer_depth: u32, b: u64, c: u64) -> Self {
        SampleSpec {
            signature,
            prufer_depth,
            q_numerator_bound: b,
            q_denominator_bound: c,
            mode: SampleMode::Exhaustive,
            cap: DEFAULT_CAP,
        }
    }

    pub fn random(
        signature: Arc<AmbientSignature>,
        prufer_depth: u32,
        b: u64,
        c: u64,
        count: usize,
        seed: u64,
    ) -> Self {
        SampleSpec {
            mode: SampleMode::Random { count, seed },
            ..Self::exhaustive(signature, prufer_depth, b, c)
        }
    }

    pub fn describe(&self) -> SampleDescription {
        SampleDescription {
            signature: self.signature.to_string(),
            prufer_depth: self.prufer_depth,
            q_numerator_bound: self.q_numerator_bound,
            q_denominator_bound: self.q_denominator_bound,
            mode: self.mode,
            cap: self.cap,
        }
    }

    fn axes(&self) -> Result<Axes, VerifyError> {
        if self.prufer_depth == 0 {
            return Err(VerifyError::BadBounds("prufer depth"));
        }
        if self.q_numerator_bound == 0 {
            return Err(VerifyError::BadBounds("q numerator bound"));
        }
        if self.q_denominator_bound == 0 {
            return Err(VerifyError::BadBounds("q denominator bound"));
        }
        let prufer = self
            .signature
            .prufer_factors()
            .iter()
            .map(|&p| {
                let den = BigInt::from(p).pow(self.prufer_depth);
                let n = den
                    .to_u64()
                    .filter(|&n| n as u128 <= self.cap as u128)
                    .ok_or_else(|| VerifyError::CapExceeded {
                        size: den.to_u128().unwrap_or(u128::MAX),
                        cap: self.cap,
                    })?;
                Ok((0..n)
                    .map(|k| PruferCoord::new(k, den.clone(), p).expect("p-power denominator"))
                    .collect())
            })
            .collect::<Result<Vec<Vec<PruferCoord>>, VerifyError>>()?;
        let b = self.q_numerator_bound as i64;
        let free_values: Vec<BigRational> = match self.signature.free_mode() {
            FreeMode::Integer => (-b..=b)
                .map(|n| BigRational::from_integer(n.into()))
                .collect(),
            FreeMode::Rational => {
                let mut vals: Vec<BigRational> = (-b..=b)
                    .flat_map(|n| {
                        (1..=self.q_denominator_bound as i64)
                            .map(move |m| BigRational::new(n.into(), m.into()))
                    })
                    .collect();
                vals.sort();
                vals.dedup();
                vals
            }
        };
        Ok(Axes {
            prufer,
            free_values,
        })
    }

    /// Number of elements in the window.
    pub fn window_size(&self) -> Result<u128, VerifyError> {
        let axes = self.axes()?;
        Ok(axes.size(&self.signature))
    }
}

struct Axes {
    prufer: Vec<Vec<PruferCoord>>,
    free_values: Vec<BigRational>,
}

impl Axes {
    fn size(&self, sig: &AmbientSignature) -> u128 {
        let mut n: u128 = 1;
        for v in &self.prufer {
            n = n.saturating_mul(v.len() as u128);
        }
        n = n.saturating_mul(
            1u128
                .checked_shl(sig.order_two_count() as u32)
                .unwrap_or(u128::MAX),
        );
        for _ in 0..sig.free_rank() {
            n = n.saturating_mul(self.free_values.len() as u128);
        }
        n
    }

    /// Radix of every coordinate, Prüfer first, then bits, then free.
    fn radices(&self, sig: &AmbientSignature) -> Vec<usize> {
        self.prufer
            .iter()
            .map(Vec::len)
            .chain(std::iter::repeat_n(2, sig.order_two_count()))
            .chain(std::iter::repeat_n(self.free_values.len(), sig.free_rank()))
            .collect()
    }

    fn element(&self, sig: &Arc<AmbientSignature>, digits: &[usize]) -> AmbientElement {
        let np = self.prufer.len();
        let s = sig.order_two_count();
        let d: BTreeMap<usize, PruferCoord> = (0..np)
            .map(|i| (i, self.prufer[i][digits[i]].clone()))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        let t = digits[np..np + s].iter().map(|&b| b == 1).collect();
        let q = digits[np + s..]
            .iter()
            .map(|&k| self.free_values[k].clone())
            .collect();
        AmbientElement::new(sig, d, t, q).expect("window elements are valid")
    }
}

/// Elements of the window: every one exactly once in exhaustive mode (last
/// coordinate varying fastest), or `count` uniform draws reproducible from
/// the seed in random mode.
pub fn enumerate_sample(spec: &SampleSpec) -> Result<Vec<AmbientElement>, VerifyError> {
    let axes = spec.axes()?;
    let sig = &spec.signature;
    let radices = axes.radices(sig);
    match spec.mode {
        SampleMode::Exhaustive => {
            let size = axes.size(sig);
            if size > spec.cap as u128 {
                return Err(VerifyError::CapExceeded {
                    size,
                    cap: spec.cap,
                });
            }
            let mut out = Vec::with_capacity(size as usize);
            let mut digits = vec![0usize; radices.len()];
            for _ in 0..size {
                out.push(axes.element(sig, &digits));
                for k in (0..digits.len()).rev() {
                    digits[k] += 1;
                    if digits[k] < radices[k] {
                        break;
                    }
                    digits[k] = 0;
                }
            }
            Ok(out)
        }
        SampleMode::Random { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok((0..count)
                .map(|_| {
                    let digits: Vec<usize> = radices.iter().map(|&r| rng.gen_range(0..r)).collect();
                    axes.element(sig, &digits)
                })
                .collect())
        }
    }
}

/// The main sweep window: `Z(3^∞) ⊕ Z(5^∞) ⊕ (Z/2)^2 ⊕ Q^2`, Prüfer
/// denominators up to `p^2`, free coordinates `n/m` with `|n| ≤ 2`,
/// `m ≤ 2`. 44 100 elements.
pub fn default_sample() -> SampleSpec {
    let sig = AmbientSignature::new(vec![3, 5], 2, 2, FreeMode::Rational).expect("odd primes");
    SampleSpec::exhaustive(sig, 2, 2, 2)
}

/// A window on which the colouring with `layer` removed has monochromatic
/// triples (the full colouring has none):
///
/// * `halvable`: `Z(3^∞) ⊕ (Z/2)^2 ⊕ Q`, depth 1, `|n| ≤ 1`, `m ≤ 1`. Any
///   `a`, `b` differing only in their order-2 bits give `2a = 2b` and
///   `a + b` with the same profiles.
/// * `d`: `Z(3^∞) ⊕ Z(5^∞) ⊕ Z/2`, depth 1. For `a = 1/3`, `b = 2/3` the
///   three elements `2/3`, `1/3`, `0` are all halvable with empty free part.
/// * `y`: `(Z/2) ⊕ Q`, `|n| ≤ 2`, `m ≤ 1`. For `a = 1`, `b = 2` the
///   elements `2`, `4`, `3` are all halvable with empty Prüfer part.
pub fn layer_sample(layer: crate::colouring::Layer) -> SampleSpec {
    use crate::colouring::Layer;
    let (prufer, s, r, b) = match layer {
        Layer::Halvable => (vec![3], 2, 1, 1),
        Layer::DProfile => (vec![3, 5], 1, 0, 1),
        Layer::YProfile => (vec![], 1, 1, 2),
    };
    let sig = AmbientSignature::new(prufer, s, r, FreeMode::Rational).expect("odd primes");
    SampleSpec::exhaustive(sig, 1, b, 1)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub a_index: usize,
    pub b_index: usize,
    pub a: String,
    pub b: String,
    pub colour: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleReport {
    pub sample_size: usize,
    /// Unordered index pairs in the sample.
    pub pair_count: u64,
    /// Pairs of distinct elements whose doubles share a colour.
    pub candidate_pairs: u64,
    pub violation_count: u64,
    /// The first violations in `(a_index, b_index)` order, at most the
    /// configured limit.
    pub violations: Vec<Violation>,
    pub elapsed_ms: u64,
}

impl TripleReport {
    pub fn is_clean(&self) -> bool {
        self.violation_count == 0
    }

    /// The same report with the timing field zeroed.
    pub fn without_timing(&self) -> Self {
        TripleReport {
            elapsed_ms: 0,
            ..self.clone()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepOptions {
    /// Worker threads; 1 runs on the calling thread.
    pub threads: usize,
    pub violation_limit: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            threads: 1,
            violation_limit: DEFAULT_VIOLATION_LIMIT,
        }
    }
}

#[derive(Default)]
struct Tally {
    candidates: u64,
    count: u64,
    kept: Vec<(usize, usize)>,
}

impl Tally {
    fn merge(mut self, other: Tally, limit: usize) -> Tally {
        self.candidates += other.candidates;
        self.count += other.count;
        self.kept.extend(other.kept);
        self.kept.sort_unstable();
        self.kept.truncate(limit);
        self
    }
}

/// Checks every unordered pair of distinct elements for
/// `colour(2a) = colour(2b) = colour(a + b)`.
///
/// Elements are bucketed by the colour of their double first, so `a + b`
/// is only coloured for pairs inside a bucket. The report does not depend
/// on the thread count.
pub fn find_mono_triples<F>(
    elements: &[AmbientElement],
    colour_fn: F,
    opts: SweepOptions,
) -> Result<TripleReport, VerifyError>
where
    F: Fn(&AmbientElement) -> Colour + Sync,
{
    let start = Instant::now();
    let limit = opts.violation_limit;

    let sweep = || {
        let double_colours: Vec<Colour> = if opts.threads > 1 {
            elements
                .par_iter()
                .map(|a| colour_fn(&a.double()))
                .collect()
        } else {
            elements.iter().map(|a| colour_fn(&a.double())).collect()
        };
        let mut buckets: HashMap<&Colour, Vec<usize>> = HashMap::new();
        for (i, c) in double_colours.iter().enumerate() {
            buckets.entry(c).or_default().push(i);
        }
        let buckets: Vec<(&Colour, Vec<usize>)> =
            buckets.into_iter().filter(|(_, v)| v.len() > 1).collect();
        // one task per (bucket, first element)
        let tasks: Vec<(usize, usize)> = buckets
            .iter()
            .enumerate()
            .flat_map(|(b, (_, members))| (0..members.len() - 1).map(move |p| (b, p)))
            .collect();

        let run = |&(b, p): &(usize, usize)| -> Tally {
            let (colour, members) = &buckets[b];
            let i = members[p];
            let a = &elements[i];
            let mut tally = Tally::default();
            for &j in &members[p + 1..] {
                let other = &elements[j];
                if a == other {
                    continue;
                }
                tally.candidates += 1;
                let sum = a.add(other).expect("sample shares one signature");
                if colour_fn(&sum) == **colour {
                    tally.count += 1;
                    if tally.kept.len() < limit {
                        tally.kept.push((i, j));
                    }
                }
            }
            tally
        };

        if opts.threads > 1 {
            tasks
                .par_iter()
                .map(run)
                .reduce(Tally::default, |x, y| x.merge(y, limit))
        } else {
            tasks
                .iter()
                .map(run)
                .fold(Tally::default(), |x, y| x.merge(y, limit))
        }
    };

    let tally = if opts.threads > 1 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.threads)
            .build()
            .map_err(|e| VerifyError::Pool(e.to_string()))?
            .install(sweep)
    } else {
        sweep()
    };

    let violations = tally
        .kept
        .iter()
        .map(|&(i, j)| Violation {
            a_index: i,
            b_index: j,
            a: elements[i].to_string(),
            b: elements[j].to_string(),
            colour: colour_fn(&elements[i].double()).encode(),
        })
        .collect();
    let n = elements.len() as u64;
    Ok(TripleReport {
        sample_size: elements.len(),
        pair_count: n * n.saturating_sub(1) / 2,
        candidate_pairs: tally.candidates,
        violation_count: tally.count,
        violations,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosetReport {
    pub elements: usize,
    /// Distinct cosets of the order-2 part among the elements.
    pub cosets: usize,
    pub halvable_elements: usize,
    pub max_halvable_per_coset: usize,
    /// Cosets (represented with zero order-2 bits) holding more than one
    /// halvable element.
    pub offending_cosets: Vec<String>,
}

impl CosetReport {
    pub fn passed(&self) -> bool {
        self.offending_cosets.is_empty()
    }
}

/// Groups the elements by their coset of the order-2 subgroup (equal `d`
/// and `q` parts) and checks that each coset holds at most one halvable
/// element.
pub fn check_coset_uniqueness(elements: &[AmbientElement]) -> CosetReport {
    check_coset_uniqueness_with(elements, is_halvable)
}

/// [`check_coset_uniqueness`] with an arbitrary halvability predicate.
pub fn check_coset_uniqueness_with<P>(elements: &[AmbientElement], halvable: P) -> CosetReport
where
    P: Fn(&AmbientElement) -> bool,
{
    type Key<'a> = (&'a BTreeMap<usize, PruferCoord>, &'a [BigRational]);
    let mut cosets: HashMap<Key<'_>, (usize, &AmbientElement)> = HashMap::new();
    let mut halvable_elements = 0;
    let mut seen = std::collections::HashSet::new();
    for a in elements {
        let entry = cosets.entry((a.d_part(), a.q_part())).or_insert((0, a));
        // duplicates in random samples are one element
        if halvable(a) && seen.insert(a) {
            entry.0 += 1;
            halvable_elements += 1;
        }
    }
    let mut offending: Vec<String> = cosets
        .values()
        .filter(|(n, _)| *n > 1)
        .map(|(_, rep)| {
            AmbientElement::new(
                rep.signature(),
                rep.d_part().clone(),
                vec![false; rep.t_part().len()],
                rep.q_part().to_vec(),
            )
            .expect("same coordinates")
            .to_string()
        })
        .collect();
    offending.sort();
    CosetReport {
        elements: elements.len(),
        cosets: cosets.len(),
        halvable_elements,
        max_halvable_per_coset: cosets.values().map(|(n, _)| *n).max().unwrap_or(0),
        offending_cosets: offending,
    }
}

/// Pairs `(g, h)` with `2g ≠ 2h` both nonzero and `2g − 2h` of order 2,
/// i.e. two distinct halvable elements in one coset of the order-2
/// subgroup. Each such pair forces `g − h` to have order 4.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionSearch {
    pub group: String,
    pub witness: Option<ObstructionWitness>,
    /// Pairs meeting the hypotheses on `u = 2g`, `v = 2h`.
    pub qualifying_pairs: u64,
    /// Of those, how many have `g − h` of order exactly 4.
    pub order_four_pairs: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionWitness {
    pub g: String,
    pub h: String,
    pub u: String,
    pub v: String,
    pub u_minus_v: String,
    pub u_minus_v_order: String,
    pub g_minus_h: String,
    pub g_minus_h_order: String,
}

impl ObstructionSearch {
    pub fn found(&self) -> bool {
        self.witness.is_some()
    }

    /// Every qualifying pair has `g − h` of order 4.
    pub fn always_order_four(&self) -> bool {
        self.qualifying_pairs == self.order_four_pairs
    }
}

/// Exhaustive obstruction search over a finite group, pairs `g < h` in
/// index order.
pub fn search_obstruction_finite(g: &FiniteGroupSpec) -> ObstructionSearch {
    let mut witness = None;
    let mut qualifying = 0;
    let mut order_four = 0;
    let doubles: Vec<usize> = (0..g.size()).map(|x| g.double(x)).collect();
    for a in 0..g.size() {
        let u = doubles[a];
        if u == 0 {
            continue;
        }
        for b in a + 1..g.size() {
            let v = doubles[b];
            if v == 0 || u == v {
                continue;
            }
            let diff = g.sub(u, v);
            if g.element_order(diff) != 2 {
                continue;
            }
            qualifying += 1;
            let gh = g.sub(a, b);
            if g.element_order(gh) == 4 {
                order_four += 1;
                if witness.is_none() {
                    witness = Some(ObstructionWitness {
                        g: g.format(a),
                        h: g.format(b),
                        u: g.format(u),
                        v: g.format(v),
                        u_minus_v: g.format(diff),
                        u_minus_v_order: "2".into(),
                        g_minus_h: g.format(gh),
                        g_minus_h_order: g.element_order(gh).to_string(),
                    });
                }
            }
        }
    }
    ObstructionSearch {
        group: g.to_string(),
        witness,
        qualifying_pairs: qualifying,
        order_four_pairs: order_four,
    }
}

/// The same search over a sample of an ambient group, which has no element
/// of order 4, so nothing qualifies.
pub fn search_obstruction_ambient(elements: &[AmbientElement]) -> ObstructionSearch {
    let two = Order::finite(2);
    let four = Order::finite(4);
    let mut witness = None;
    let mut qualifying = 0;
    let mut order_four = 0;
    let doubles: Vec<AmbientElement> = elements.iter().map(AmbientElement::double).collect();
    for i in 0..elements.len() {
        if doubles[i].is_zero() {
            continue;
        }
        for j in i + 1..elements.len() {
            if doubles[j].is_zero() || doubles[i] == doubles[j] {
                continue;
            }
            let diff = doubles[i].sub(&doubles[j]).expect("shared signature");
            if diff.element_order() != two {
                continue;
            }
            qualifying += 1;
            let gh = elements[i].sub(&elements[j]).expect("shared signature");
            if gh.element_order() == four {
                order_four += 1;
                witness.get_or_insert_with(|| ObstructionWitness {
                    g: elements[i].to_string(),
                    h: elements[j].to_string(),
                    u: doubles[i].to_string(),
                    v: doubles[j].to_string(),
                    u_minus_v: diff.to_string(),
                    u_minus_v_order: "2".into(),
                    g_minus_h: gh.to_string(),
                    g_minus_h_order: "4".into(),
                });
            }
        }
    }
    let group = elements
        .first()
        .map(|e| e.signature().to_string())
        .unwrap_or_default();
    ObstructionSearch {
        group,
        witness,
        qualifying_pairs: qualifying,
        order_four_pairs: order_four,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DemoTranscript {
    pub search: ObstructionSearch,
    pub lines: Vec<String>,
}

/// Shows where the coset-uniqueness step breaks once order-4 elements are
/// allowed: in `Z/4 ⊕ Z/4` two distinct halvable elements share a coset of
/// the order-2 subgroup.
pub fn order4_obstruction_demo() -> DemoTranscript {
    let g = FiniteGroupSpec::new(vec![4, 4]).expect("16 elements");
    obstruction_demo_in(&g)
}

pub fn obstruction_demo_in(g: &FiniteGroupSpec) -> DemoTranscript {
    let search = search_obstruction_finite(g);
    let mut lines = vec![format!("group: {}", search.group)];
    match &search.witness {
        Some(w) => {
            lines.push(format!("g = {}, h = {}", w.g, w.h));
            lines.push(format!("u = 2g = {}, v = 2h = {}, u != v", w.u, w.v));
            lines.push(format!(
                "u - v = {} has order {}: u and v lie in one coset of the order-2 subgroup",
                w.u_minus_v, w.u_minus_v_order
            ));
            lines.push(format!(
                "both u and v are halvable, yet g - h = {} has order {}",
                w.g_minus_h, w.g_minus_h_order
            ));
            lines.push(
                "so a coset of the order-2 subgroup can hold two halvable elements; the halvability colour no longer separates 2a from a+b"
                    .into(),
            );
        }
        None => lines.push(
            "no pair of distinct halvable elements shares a coset of the order-2 subgroup".into(),
        ),
    }
    lines.push(format!(
        "qualifying pairs: {}, with g - h of order 4: {}",
        search.qualifying_pairs, search.order_four_pairs
    ));
    DemoTranscript { search, lines }
}
