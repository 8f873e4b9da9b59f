//! Sampled checks of the tangle axioms with exact finiteness: finite stars
//! inside a tangle have infinite `⋂ B`, membership survives finite
//! perturbations, every `B` side is infinite, and orientations are
//! consistent. Also builds the infinite stars that separate end tangles
//! from ultrafilter tangles.

use std::sync::Arc;

use rand::Rng;

use crate::components::{components, ComponentRef, ComponentSet, Descriptor, Selection};
use crate::error::Result;
use crate::sampling::Sampler;
use crate::schema::Vertex;
use crate::separation::{meet_of_b, Separation};
use crate::symset::SymVertexSet;
use crate::tangle::Tangle;

#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    pub stars: usize,
    pub star_violations: Vec<String>,
    pub perturbations: usize,
    pub perturbation_violations: Vec<String>,
    pub b_sides: usize,
    pub finite_b: Vec<String>,
    pub pairs: usize,
    pub inconsistent: Vec<String>,
    pub small_separations: usize,
    pub small_violations: Vec<String>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.star_violations.is_empty()
            && self.perturbation_violations.is_empty()
            && self.finite_b.is_empty()
            && self.inconsistent.is_empty()
            && self.small_violations.is_empty()
    }
}

/// Runs `samples` rounds of each check on `t`.
pub fn axiom_check(t: &Tangle, smp: &mut Sampler, samples: usize) -> Result<AxiomReport> {
    let mut rep = AxiomReport::default();
    for _ in 0..samples {
        let size = smp.rng().gen_range(1..=6);
        let star = smp.nonempty_star_in(t, size)?;
        if !star.is_empty() {
            rep.stars += 1;
            if meet_of_b(&star).is_finite() {
                rep.star_violations.push(
                    star.iter()
                        .map(Separation::text)
                        .collect::<Vec<_>>()
                        .join(" ; "),
                );
            }
        }

        let s = t.orient(&smp.separation(4)?);
        rep.b_sides += 1;
        if s.b().is_finite() {
            rep.finite_b.push(s.text());
        }
        let p = smp.perturb(&s)?;
        rep.perturbations += 1;
        if !t.contains(&p) {
            rep.perturbation_violations.push(format!("{s} -> {p}"));
        }

        let u = t.orient(&smp.separation(4)?);
        rep.pairs += 1;
        for (x, y) in [(&s, &u), (&u, &s)] {
            if x != y && x.inverse().lt(y)? {
                rep.inconsistent
                    .push(format!("{x} and {y} point away from each other"));
            }
        }

        let a = smp.vertex_set(4);
        let small = Separation::new(components(smp.schema(), &a)?, Default::default());
        let small = small.inverse();
        rep.small_separations += 1;
        if !small.is_small() || !t.contains(&small) {
            rep.small_violations.push(small.text());
        }
    }
    Ok(rep)
}

/// An infinite star `{(X ∪ C, V ∖ C) : C ∈ 𝒞}` for a collection `𝒞` of
/// components of `G - X`. Its `⋂ B` is `X ∪ ⋃(C_X ∖ 𝒞)`.
#[derive(Clone, Debug)]
pub struct ComponentStar {
    pub comps: Arc<ComponentSet>,
    pub parts: Selection,
}

impl ComponentStar {
    pub fn meet(&self) -> SymVertexSet {
        SymVertexSet::from_vertices(self.comps.separator())
            .union(&self.comps.vertices(&self.comps.complement(&self.parts)))
    }

    pub fn is_infinite(&self) -> bool {
        !self.parts.is_finite_collection()
    }

    fn member(&self, r: ComponentRef) -> Separation {
        Separation::new(
            self.comps.clone(),
            self.comps.complement(&self.comps.single(r)),
        )
    }

    /// Whether every member lies in `t`, checking only the first `probe`
    /// members of each class of components.
    pub fn contained_in(&self, t: &Tangle, probe: usize) -> bool {
        let mut refs: Vec<ComponentRef> = self
            .parts
            .concrete
            .iter()
            .map(|&desc| ComponentRef { desc, index: None })
            .collect();
        for (&desc, idx) in &self.parts.classes {
            refs.extend(idx.iter().take(probe).map(|i| ComponentRef {
                desc,
                index: Some(i),
            }));
        }
        refs.into_iter().all(|r| t.contains(&self.member(r)))
    }

    pub fn text(&self) -> String {
        format!(
            "star at X={} over {}",
            self.comps.schema().vertex_list_text(self.comps.separator()),
            self.comps.selection_text(&self.parts)
        )
    }
}

/// For an ultrafilter tangle: all components at its witness, a star in the
/// tangle whose `⋂ B` is the finite witness.
pub fn witness_star(t: &Tangle) -> Result<Option<ComponentStar>> {
    match t {
        Tangle::Uf { .. } => {
            let x = t.minimal_witness()?;
            let comps = components(t.schema(), &x)?;
            let parts = comps.all();
            Ok(Some(ComponentStar { comps, parts }))
        }
        Tangle::End { .. } => Ok(None),
    }
}

/// For a tangle and a separator `X`: the star of all components except
/// those the induced ultrafilter at `X` is concentrated on.
pub fn uniform_star(t: &Tangle, x: &std::collections::BTreeSet<Vertex>) -> Result<ComponentStar> {
    let h = t.induced_uf(x)?;
    let comps = h.comps().clone();
    let parts = match h.generator() {
        Some(r) => comps.complement(&comps.single(r)),
        None => {
            let mut all = comps.all();
            for (d, desc) in comps.descriptors().iter().enumerate() {
                if let Descriptor::Class { .. } = desc {
                    all.classes.remove(&d);
                }
            }
            all
        }
    };
    Ok(ComponentStar { comps, parts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::find_schema;
    use crate::tangle::representative_tangles;
    use crate::ultrafilter::Policy;

    #[test]
    fn suite_tangles_pass_sampled_axioms() {
        for name in ["RAY", "STAR", "SPIDER", "CLIQRAY", "FAN2"] {
            let s = find_schema(name).unwrap();
            let mut smp = Sampler::new(&s, 11, 6);
            for t in representative_tangles(&s, Policy::Canonical) {
                let rep = axiom_check(&t, &mut smp, 15).unwrap();
                assert!(rep.passed(), "{} {rep:?}", t.id());
            }
        }
    }

    #[test]
    fn ultrafilter_tangles_contain_a_star_with_finite_meet() {
        let s = find_schema("SPIDER").unwrap();
        let t = Tangle::parse_id(&s, "uf:legs").unwrap();
        let star = witness_star(&t).unwrap().unwrap();
        assert!(star.is_infinite());
        assert!(star.meet().is_finite());
        assert!(star.contained_in(&t, 10));
    }

    #[test]
    fn end_tangle_stars_keep_the_end() {
        let s = find_schema("SPIDER").unwrap();
        let t = Tangle::parse_id(&s, "end:legs[2].t").unwrap();
        let x = s.parse_vertex_list("c").unwrap();
        let star = uniform_star(&t, &x).unwrap();
        assert!(star.is_infinite());
        assert!(star.contained_in(&t, 10));
        assert!(!star.meet().is_finite());
    }
}
