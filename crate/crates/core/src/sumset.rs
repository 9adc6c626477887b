//! Finite-scale search for monochromatic pair sumsets `{2x, 2y, x+y}` in
//! small finite abelian groups, the setting where elements of order 4 do
//! force structure.
//!
//! Only two-element sets `X = {x, y}` are considered.

use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

/// Largest group handled by the exhaustive routines.
pub const DEFAULT_GROUP_CAP: usize = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("cyclic orders must be at least 2, got {0}")]
    BadOrder(u64),
    #[error("group has more than {cap} elements")]
    TooLarge { cap: usize },
    #[error("colour count must be positive")]
    NoColours,
    #[error("colouring table has {got} entries, group has {expected}")]
    TableSize { expected: usize, got: usize },
}

/// `Z/o₁ ⊕ … ⊕ Z/oₖ`. Elements are indexed in mixed radix with coordinate
/// 0 least significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteGroupSpec {
    orders: Vec<u64>,
    #[serde(skip)]
    size: usize,
}

impl FiniteGroupSpec {
    pub fn new(orders: Vec<u64>) -> Result<Self, SearchError> {
        Self::with_cap(orders, DEFAULT_GROUP_CAP)
    }

    pub fn with_cap(orders: Vec<u64>, cap: usize) -> Result<Self, SearchError> {
        let mut size: usize = 1;
        for &o in &orders {
            if o < 2 {
                return Err(SearchError::BadOrder(o));
            }
            size = usize::try_from(o)
                .ok()
                .and_then(|o| size.checked_mul(o))
                .filter(|&s| s <= cap)
                .ok_or(SearchError::TooLarge { cap })?;
        }
        Ok(FiniteGroupSpec { orders, size })
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn coords(&self, mut index: usize) -> Vec<u64> {
        self.orders
            .iter()
            .map(|&o| {
                let c = (index as u64) % o;
                index /= o as usize;
                c
            })
            .collect()
    }

    pub fn index(&self, coords: &[u64]) -> usize {
        let mut index = 0usize;
        for (&c, &o) in coords.iter().zip(&self.orders).rev() {
            index = index * o as usize + (c % o) as usize;
        }
        index
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        let (ca, cb) = (self.coords(a), self.coords(b));
        let sum: Vec<u64> = ca
            .iter()
            .zip(&cb)
            .zip(&self.orders)
            .map(|((x, y), o)| (x + y) % o)
            .collect();
        self.index(&sum)
    }

    pub fn neg(&self, a: usize) -> usize {
        let c: Vec<u64> = self
            .coords(a)
            .iter()
            .zip(&self.orders)
            .map(|(x, o)| (o - x) % o)
            .collect();
        self.index(&c)
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn double(&self, a: usize) -> usize {
        self.add(a, a)
    }

    /// Element order as the lcm of coordinate orders.
    pub fn element_order(&self, a: usize) -> u64 {
        self.coords(a)
            .iter()
            .zip(&self.orders)
            .fold(1, |acc, (&c, &o)| acc.lcm(&(o / c.gcd(&o))))
    }

    pub fn format(&self, a: usize) -> String {
        let c: Vec<String> = self.coords(a).iter().map(u64::to_string).collect();
        format!("({})", c.join(","))
    }
}

impl fmt::Display for FiniteGroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.orders.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.orders.iter().map(|o| format!("Z/{o}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Colour id per group element, indexed like the group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ColouringTable {
    colours: Vec<u32>,
}

impl ColouringTable {
    pub fn new(colours: Vec<u32>) -> Self {
        ColouringTable { colours }
    }

    pub fn constant(size: usize) -> Self {
        ColouringTable {
            colours: vec![0; size],
        }
    }

    pub fn colours(&self) -> &[u32] {
        &self.colours
    }

    pub fn colour_of(&self, a: usize) -> u32 {
        self.colours[a]
    }

    pub fn num_colours(&self) -> usize {
        self.colours.iter().max().map_or(0, |&m| m as usize + 1)
    }
}

/// First (in index order) pair `x < y` with `2x`, `2y`, `x + y` one colour.
pub fn find_mono_pair_sumset(
    g: &FiniteGroupSpec,
    col: &ColouringTable,
) -> Result<Option<(usize, usize)>, SearchError> {
    if col.colours.len() != g.size() {
        return Err(SearchError::TableSize {
            expected: g.size(),
            got: col.colours.len(),
        });
    }
    let doubles: Vec<usize> = (0..g.size()).map(|x| g.double(x)).collect();
    for x in 0..g.size() {
        for y in x + 1..g.size() {
            let c = col.colour_of(doubles[x]);
            if col.colour_of(doubles[y]) == c && col.colour_of(g.add(x, y)) == c {
                return Ok(Some((x, y)));
            }
        }
    }
    Ok(None)
}

/// The distinct element sets `{2x, 2y, x+y}` over pairs `x ≠ y`, each
/// sorted ascending (a set of two elements repeats one of them).
pub fn pair_sumset_constraints(g: &FiniteGroupSpec) -> Vec<[usize; 3]> {
    let mut set = BTreeSet::new();
    let doubles: Vec<usize> = (0..g.size()).map(|x| g.double(x)).collect();
    for x in 0..g.size() {
        for y in x + 1..g.size() {
            let mut t = [doubles[x], doubles[y], g.add(x, y)];
            t.sort_unstable();
            set.insert(t);
        }
    }
    set.into_iter().collect()
}

/// Outcome of a bounded search. Budget exhaustion is its own outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Every colouring admits a monochromatic pair sumset.
    Forced,
    /// The lexicographically least colouring avoiding all of them.
    NotForced(ColouringTable),
    Unknown,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Forced => "forced",
            Verdict::NotForced(_) => "not-forced",
            Verdict::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOutcome {
    pub verdict: Verdict,
    /// Colour assignments tried.
    pub nodes: u64,
}

/// Backtracking over colourings of `g` with at most `colours` colours, with
/// at most `budget` colour assignments tried.
///
/// Elements are coloured in a fixed order: the subgroup `2G` of doubles
/// first, then everything else, each part in index order. Every constraint
/// set `{2x, 2y, x+y}` has at most one element outside `2G`. The first
/// element always gets colour 0, which removes colour permutations. Dead
/// ends jump back to the latest element involved in a conflict
/// (conflict-directed backjumping). The witness is the least avoiding
/// colouring in that order, with colour 0 on the first element.
pub fn all_colourings_forced(
    g: &FiniteGroupSpec,
    colours: u32,
    budget: u64,
) -> Result<SearchOutcome, SearchError> {
    if colours == 0 {
        return Err(SearchError::NoColours);
    }
    let constraints = pair_sumset_constraints(g);
    Ok(backtrack(g, &constraints, colours, budget))
}

/// Search order: doubles first, then the rest.
fn search_order(g: &FiniteGroupSpec) -> Vec<usize> {
    let mut is_double = vec![false; g.size()];
    for x in 0..g.size() {
        is_double[g.double(x)] = true;
    }
    (0..g.size())
        .filter(|&e| is_double[e])
        .chain((0..g.size()).filter(|&e| !is_double[e]))
        .collect()
}

fn backtrack(
    g: &FiniteGroupSpec,
    constraints: &[[usize; 3]],
    colours: u32,
    budget: u64,
) -> SearchOutcome {
    let n = g.size();
    let order = search_order(g);
    let mut position = vec![0usize; n];
    for (p, &e) in order.iter().enumerate() {
        position[e] = p;
    }
    // constraint checked at its last position; the other two positions may
    // repeat that last one
    let mut closing: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for c in constraints {
        let mut p = c.map(|e| position[e]);
        p.sort_unstable();
        closing[p[2]].push((p[0], p[1]));
    }

    let mut col = vec![0u32; n];
    let mut next = vec![0u32; n];
    let mut conflicts: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    let mut nodes = 0u64;
    let mut pos = 0usize;
    loop {
        if pos == n {
            let mut table = vec![0u32; n];
            for (p, &e) in order.iter().enumerate() {
                table[e] = col[p];
            }
            return SearchOutcome {
                verdict: Verdict::NotForced(ColouringTable::new(table)),
                nodes,
            };
        }
        let limit = if pos == 0 { 1 } else { colours };
        let mut placed = false;
        while next[pos] < limit {
            if nodes >= budget {
                return SearchOutcome {
                    verdict: Verdict::Unknown,
                    nodes,
                };
            }
            nodes += 1;
            let k = next[pos];
            next[pos] += 1;
            let at = |p: usize| if p == pos { k } else { col[p] };
            match closing[pos]
                .iter()
                .find(|&&(a, b)| at(a) == k && at(b) == k)
            {
                Some(&(a, b)) => {
                    for p in [a, b] {
                        if p < pos {
                            conflicts[pos].insert(p);
                        }
                    }
                }
                None => {
                    col[pos] = k;
                    placed = true;
                    break;
                }
            }
        }
        if placed {
            pos += 1;
            if pos < n {
                next[pos] = 0;
                conflicts[pos].clear();
            }
        } else {
            let mut conflict = std::mem::take(&mut conflicts[pos]);
            let Some(back) = conflict.pop_last() else {
                return SearchOutcome {
                    verdict: Verdict::Forced,
                    nodes,
                };
            };
            conflicts[back].extend(conflict);
            pos = back;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinColours {
    Found {
        colours: u32,
        witness: ColouringTable,
    },
    Unknown {
        lower_bound: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinColoursOutcome {
    pub result: MinColours,
    pub nodes: u64,
}

/// Least `c` for which some `c`-colouring avoids every monochromatic pair
/// sumset. `|G|` colours always suffice, since every constraint set holds
/// two distinct elements. The budget is shared across all `c` tried.
pub fn min_colours_avoiding(g: &FiniteGroupSpec, budget: u64) -> MinColoursOutcome {
    let constraints = pair_sumset_constraints(g);
    let mut nodes = 0u64;
    for c in 1..=g.size() as u32 {
        let out = backtrack(g, &constraints, c, budget - nodes);
        nodes += out.nodes;
        match out.verdict {
            Verdict::Forced => continue,
            Verdict::NotForced(witness) => {
                return MinColoursOutcome {
                    result: MinColours::Found {
                        colours: c,
                        witness,
                    },
                    nodes,
                }
            }
            Verdict::Unknown => {
                return MinColoursOutcome {
                    result: MinColours::Unknown { lower_bound: c },
                    nodes,
                }
            }
        }
    }
    unreachable!("|G| colours always avoid monochromatic pair sumsets")
}
