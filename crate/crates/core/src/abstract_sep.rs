//! Finite posets with an order-reversing involution, and the reformulation
//! of the tangle property through suprema of finite stars.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::components::Selection;
use crate::error::{Error, Result};
use crate::finite::FiniteGraph;
use crate::finite_tangle::{FiniteSep, SepSystem};
use crate::sampling::Sampler;
use crate::schema::SchemaRef;
use crate::separation::{is_star, meet_of_b, supremum, Separation};
use crate::tangle::Tangle;

/// Elements `0..n`, the order as one bitset row per element (`row[i]` holds
/// every `j` with `i ≤ j`), and the involution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractSystem {
    pub labels: Vec<String>,
    rows: Vec<Vec<u64>>,
    pub inv: Vec<usize>,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Findings {
    pub elements: usize,
    pub violations: Vec<String>,
}

impl Findings {
    pub fn valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl AbstractSystem {
    pub fn new(labels: Vec<String>, leq: impl Fn(usize, usize) -> bool, inv: Vec<usize>) -> Self {
        let n = labels.len();
        let mut rows = vec![vec![0u64; n.div_ceil(64)]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            for j in 0..n {
                if leq(i, j) {
                    row[j / 64] |= 1 << (j % 64);
                }
            }
        }
        AbstractSystem { labels, rows, inv }
    }

    pub fn from_separations(seps: &[FiniteSep], names: &[String]) -> Self {
        let label = |s: &FiniteSep| {
            let side = |m: u64| {
                let vs: Vec<&str> = (0..64)
                    .filter(|&v| m >> v & 1 == 1)
                    .map(|v| names[v].as_str())
                    .collect();
                vs.join(",")
            };
            format!("({{{}}},{{{}}})", side(s.a), side(s.b))
        };
        let inv = seps
            .iter()
            .map(|s| seps.iter().position(|t| *t == s.inverse()).unwrap())
            .collect();
        AbstractSystem::new(
            seps.iter().map(label).collect(),
            |i, j| seps[i].leq(seps[j]),
            inv,
        )
    }

    /// All oriented separations of `g`, of order below `k` if given.
    pub fn from_graph(g: &FiniteGraph, k: Option<usize>) -> Result<Self> {
        let sys = SepSystem::new(g, k.unwrap_or(g.vertex_count() + 1))?;
        let seps: Vec<FiniteSep> = sys.pairs.iter().flatten().copied().collect();
        Ok(Self::from_separations(&seps, g.names()))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.rows[i][j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set_leq(&mut self, i: usize, j: usize, value: bool) {
        if value {
            self.rows[i][j / 64] |= 1 << (j % 64);
        } else {
            self.rows[i][j / 64] &= !(1 << (j % 64));
        }
    }

    /// Pairs `i < j` in the order.
    pub fn strict_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (0..n).filter(move |&j| i != j).map(move |j| (i, j)))
            .filter(|&(i, j)| self.leq(i, j))
            .collect()
    }

    /// Partial order axioms and the involution laws, listing every
    /// violation.
    pub fn validate(&self) -> Findings {
        let n = self.len();
        let mut v = Vec::new();
        if self.inv.len() != n || self.inv.iter().any(|&j| j >= n) {
            v.push("involution is not a map on the elements".to_string());
            return Findings {
                elements: n,
                violations: v,
            };
        }
        let name = |i: usize| &self.labels[i];
        for i in 0..n {
            if !self.leq(i, i) {
                v.push(format!("not reflexive at {}", name(i)));
            }
            if self.inv[self.inv[i]] != i {
                v.push(format!("involution not self-inverse at {}", name(i)));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !self.leq(i, j) {
                    continue;
                }
                if i != j && self.leq(j, i) {
                    v.push(format!("not antisymmetric: {} and {}", name(i), name(j)));
                }
                if self.rows[j]
                    .iter()
                    .zip(&self.rows[i])
                    .any(|(rj, ri)| rj & !ri != 0)
                {
                    v.push(format!("not transitive above {} ≤ {}", name(i), name(j)));
                }
                if !self.leq(self.inv[j], self.inv[i]) {
                    v.push(format!(
                        "involution not order-reversing at {} ≤ {}",
                        name(i),
                        name(j)
                    ));
                }
            }
        }
        Findings {
            elements: n,
            violations: v,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Corruption {
    /// Redirects the involution of one element.
    RedirectInvolution,
    /// Adds the reverse of a strict relation.
    ReverseStrict,
    /// Removes `s ≤ s`.
    DropReflexive,
    /// Removes a strict relation but keeps its mirror under the involution.
    DropMirrored,
}

impl Corruption {
    pub const ALL: [Corruption; 4] = [
        Corruption::RedirectInvolution,
        Corruption::ReverseStrict,
        Corruption::DropReflexive,
        Corruption::DropMirrored,
    ];

    /// Applies the corruption at a random place; `None` if the system has
    /// no place for it.
    pub fn apply(self, sys: &AbstractSystem, rng: &mut impl Rng) -> Option<AbstractSystem> {
        let mut out = sys.clone();
        let n = sys.len();
        match self {
            Corruption::RedirectInvolution => {
                if n < 2 {
                    return None;
                }
                let i = rng.gen_range(0..n);
                let others: Vec<usize> = (0..n).filter(|&j| j != sys.inv[i]).collect();
                out.inv[i] = *others.choose(rng)?;
            }
            Corruption::ReverseStrict => {
                let &(i, j) = sys.strict_pairs().choose(rng)?;
                out.set_leq(j, i, true);
            }
            Corruption::DropReflexive => {
                if n == 0 {
                    return None;
                }
                let i = rng.gen_range(0..n);
                out.set_leq(i, i, false);
            }
            Corruption::DropMirrored => {
                let pairs: Vec<(usize, usize)> = sys
                    .strict_pairs()
                    .into_iter()
                    .filter(|&(i, j)| sys.inv[j] != i)
                    .collect();
                let &(i, j) = pairs.choose(rng)?;
                out.set_leq(i, j, false);
                out.set_leq(sys.inv[j], sys.inv[i], true);
            }
        }
        Some(out)
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ObservationReport {
    /// Sampled finite stars inside the tangle.
    pub stars: usize,
    /// Stars whose supremum has a small inverse.
    pub small_inverse: usize,
    /// Stars with a finite intersection of `B` sides.
    pub finite_meet: usize,
    /// Free stars (not necessarily inside the tangle) on which the padding
    /// step was run because their `⋂ B` is finite.
    pub padded: usize,
    pub violations: Vec<String>,
}

impl ObservationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks one finite star: a supremum with small inverse forces a finite
/// `⋂ B`, and if `X = ⋂ B` is finite then adding `X` to every `A` side
/// gives a star whose supremum has a small inverse. Returns
/// `(small inverse, finite meet, padded)`.
fn check_star(
    star: &[Separation],
    t: Option<&Tangle>,
    violations: &mut Vec<String>,
) -> Result<(bool, bool, bool)> {
    let text = || {
        star.iter()
            .map(Separation::text)
            .collect::<Vec<_>>()
            .join(" ; ")
    };
    let x = meet_of_b(star);
    let sup = supremum(star)?;
    let small = sup.inverse().is_small();
    let finite = x.is_finite();
    if small && !finite {
        violations.push(format!(
            "supremum has small inverse but ⋂B is infinite: {}",
            text()
        ));
    }
    if !finite {
        return Ok((small, finite, false));
    }
    let schema = sup.schema().clone();
    let padded: Vec<Separation> = star
        .iter()
        .map(|s| Separation::from_sides(&schema, &s.a().union(&x), s.b()))
        .collect::<Result<_>>()?;
    if !is_star(&padded)? {
        violations.push(format!("padding does not give a star: {}", text()));
    }
    if let Some(t) = t {
        if let Some(p) = padded.iter().find(|p| !t.contains(p)) {
            violations.push(format!("padded {} left the orientation", p.text()));
        }
    }
    if !supremum(&padded)?.inverse().is_small() {
        violations.push(format!("padded supremum has no small inverse: {}", text()));
    }
    Ok((small, finite, true))
}

/// A star of separations `(X ∪ C, V ∖ C)` over disjoint collections `C` of
/// components at one random separator; half the time the collections use up
/// every component, so that `⋂ B = X`.
fn free_star(smp: &mut Sampler, size: usize) -> Result<Vec<Separation>> {
    let comps = smp.components(4)?;
    let mut free = comps.all();
    let mut parts: Vec<Selection> = Vec::new();
    for _ in 0..size {
        let part = smp.selection(&comps).intersect(&free);
        if !part.is_empty() {
            free = free.minus(&part);
            parts.push(part);
        }
    }
    if smp.rng().gen_bool(0.5) && !free.is_empty() {
        parts.push(free);
    }
    Ok(parts
        .into_iter()
        .map(|p| Separation::new(comps.clone(), comps.complement(&p)))
        .collect())
}

/// Samples `samples` finite stars inside `t` and as many free stars.
pub fn observation_check(
    t: &Tangle,
    smp: &mut Sampler,
    samples: usize,
) -> Result<ObservationReport> {
    let mut rep = ObservationReport::default();
    for _ in 0..samples {
        let size = smp.rng().gen_range(1..=6);
        let star = smp.nonempty_star_in(t, size)?;
        if !star.is_empty() {
            rep.stars += 1;
            let (small, finite, _) = check_star(&star, Some(t), &mut rep.violations)?;
            rep.small_inverse += small as usize;
            rep.finite_meet += finite as usize;
        }
        let star = free_star(smp, size)?;
        if !star.is_empty() {
            let (_, _, padded) = check_star(&star, None, &mut rep.violations)?;
            rep.padded += padded as usize;
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug, Serialize)]
pub struct PaddingDemo {
    pub star: Vec<String>,
    pub meet: String,
    pub supremum: String,
    pub inverse_small: bool,
}

/// The star `{s, s⁻¹}` for the separation `({0..3}, {3, 4, ...})` of the
/// first core ray. Its supremum `(V, {3})` has a small inverse, so no
/// orientation containing both is a tangle.
pub fn padding_demo(schema: &SchemaRef) -> Result<PaddingDemo> {
    let x: BTreeSet<_> = schema.parse_vertex_list(&format!("{}[3]", schema.top.rays[0].name))?;
    let comps = crate::components::components(schema, &x)?;
    let far = schema.parse_vertex(&format!("{}[4]", schema.top.rays[0].name))?;
    let tail = comps
        .locate(&far)
        .ok_or_else(|| Error::Precondition("ray tail not found".into()))?;
    let s = Separation::new(comps.clone(), comps.single(tail));
    let star = vec![s.clone(), s.inverse()];
    let sup = supremum(&star)?;
    Ok(PaddingDemo {
        star: star.iter().map(Separation::text).collect(),
        meet: meet_of_b(&star).describe(schema),
        supremum: sup.text(),
        inverse_small: sup.inverse().is_small(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::find_schema;
    use crate::tangle::representative_tangles;
    use crate::ultrafilter::Policy;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn path_system_is_valid() {
        let g = FiniteGraph::path(3);
        let sys = AbstractSystem::from_graph(&g, None).unwrap();
        assert!(sys.validate().valid(), "{:?}", sys.validate());
        assert!(sys.len() > 4);
    }

    #[test]
    fn corruptions_are_rejected() {
        let sys = AbstractSystem::from_graph(&FiniteGraph::path(3), None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for c in Corruption::ALL {
            for _ in 0..10 {
                let bad = c.apply(&sys, &mut rng).unwrap();
                assert!(!bad.validate().valid(), "{c:?}");
            }
        }
    }

    #[test]
    fn ray_demo_has_small_inverse() {
        let s = find_schema("RAY").unwrap();
        let demo = padding_demo(&s).unwrap();
        assert!(demo.inverse_small);
    }

    #[test]
    fn tangles_agree_on_samples() {
        for name in ["RAY", "SPIDER", "CLIQRAY"] {
            let s = find_schema(name).unwrap();
            let mut smp = Sampler::new(&s, 5, 6);
            for t in representative_tangles(&s, Policy::Canonical) {
                let rep = observation_check(&t, &mut smp, 20).unwrap();
                assert!(rep.passed(), "{rep:?}");
                assert_eq!(rep.small_inverse, 0);
                assert_eq!(rep.finite_meet, 0);
                assert!(rep.padded > 0);
            }
        }
    }
}
