//! Seeded random generation of finite separators, component collections,
//! separations, stars inside a tangle and finite perturbations.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::components::{components, ComponentSet, Descriptor, Selection};
use crate::error::Result;
use crate::schema::{Local, SchemaRef, Vertex};
use crate::semilinear::SemilinearSet;
use crate::separation::{is_star, Separation};
use crate::symset::SymVertexSet;
use crate::tangle::Tangle;

pub struct Sampler {
    rng: ChaCha8Rng,
    schema: SchemaRef,
    pool: Vec<Vertex>,
    hubs: Vec<Vertex>,
}

impl Sampler {
    /// Draws vertices from the truncation at `depth`.
    pub fn new(schema: &SchemaRef, seed: u64, depth: u64) -> Self {
        let pool = schema.truncate(depth).vertices;
        let mut hubs: BTreeSet<Vertex> = BTreeSet::new();
        for fam in &schema.families {
            hubs.extend(fam.attach.iter().map(|&(c, _)| Vertex::Top(Local::V(c))));
        }
        for c in &schema.cliques {
            hubs.extend(c.attach.iter().map(|&h| Vertex::Top(Local::V(h))));
        }
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            schema: schema.clone(),
            pool,
            hubs: hubs.into_iter().collect(),
        }
    }

    pub fn schema(&self) -> &SchemaRef {
        &self.schema
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn pool(&self) -> &[Vertex] {
        &self.pool
    }

    /// Up to `max` vertices; hubs are added often so that families fall
    /// apart.
    pub fn vertex_set(&mut self, max: usize) -> BTreeSet<Vertex> {
        let k = self.rng.gen_range(0..=max);
        let mut x: BTreeSet<Vertex> = self
            .pool
            .choose_multiple(&mut self.rng, k)
            .copied()
            .collect();
        for h in &self.hubs {
            if self.rng.gen_bool(0.5) {
                x.insert(*h);
            }
        }
        x
    }

    /// A superset of `x` with up to `extra` more vertices.
    pub fn superset(&mut self, x: &BTreeSet<Vertex>, extra: usize) -> BTreeSet<Vertex> {
        let k = self.rng.gen_range(0..=extra);
        let mut out = x.clone();
        out.extend(self.pool.choose_multiple(&mut self.rng, k).copied());
        out
    }

    pub fn subset(&mut self, x: &BTreeSet<Vertex>) -> BTreeSet<Vertex> {
        x.iter()
            .filter(|_| self.rng.gen_bool(0.5))
            .copied()
            .collect()
    }

    pub fn index_set(&mut self) -> SemilinearSet {
        let base = match self.rng.gen_range(0..4) {
            0 => SemilinearSet::from_elements(
                (0..self.rng.gen_range(0..6)).map(|_| self.rng.gen_range(0..12)),
            ),
            1 | 2 => SemilinearSet::progression(self.rng.gen_range(0..6), self.rng.gen_range(1..5)),
            _ => SemilinearSet::at_least(self.rng.gen_range(0..8)),
        };
        let tweak = SemilinearSet::from_elements(
            (0..self.rng.gen_range(0..3)).map(|_| self.rng.gen_range(0..12)),
        );
        let set = if self.rng.gen_bool(0.5) {
            base.union(&tweak)
        } else {
            base.minus(&tweak)
        };
        if self.rng.gen_bool(0.3) {
            set.complement()
        } else {
            set
        }
    }

    pub fn selection(&mut self, comps: &ComponentSet) -> Selection {
        let mut sel = Selection::default();
        for (d, desc) in comps.descriptors().iter().enumerate() {
            match desc {
                Descriptor::Concrete(_) => {
                    if self.rng.gen_bool(0.5) {
                        sel.concrete.insert(d);
                    }
                }
                Descriptor::Class { indices, .. } => {
                    let idx = self.index_set().intersect(indices);
                    if !idx.is_empty() {
                        sel.classes.insert(d, idx);
                    }
                }
            }
        }
        sel
    }

    pub fn components(&mut self, max: usize) -> Result<Arc<ComponentSet>> {
        let x = self.vertex_set(max);
        components(&self.schema, &x)
    }

    pub fn separation(&mut self, max: usize) -> Result<Separation> {
        let comps = self.components(max)?;
        let sel = self.selection(&comps);
        Ok(Separation::new(comps, sel))
    }

    /// A random finite star contained in `t`, built either from disjoint
    /// collections at one separator or greedily across separators.
    pub fn star_in(&mut self, t: &Tangle, size: usize) -> Result<Vec<Separation>> {
        if self.rng.gen_bool(0.5) {
            self.star_at_one_separator(t, size)
        } else {
            self.star_across_separators(t, size)
        }
    }

    /// Like `star_in`, retrying a few times when the sample comes out
    /// empty.
    pub fn nonempty_star_in(&mut self, t: &Tangle, size: usize) -> Result<Vec<Separation>> {
        for _ in 0..8 {
            let star = self.star_in(t, size)?;
            if !star.is_empty() {
                return Ok(star);
            }
        }
        Ok(Vec::new())
    }

    fn star_at_one_separator(&mut self, t: &Tangle, size: usize) -> Result<Vec<Separation>> {
        let comps = self.components(4)?;
        let mut free = comps.all();
        let mut out = Vec::new();
        for _ in 0..size {
            let part = self.selection(&comps).intersect(&free);
            if part.is_empty() {
                continue;
            }
            free = free.minus(&part);
            let s = Separation::new(comps.clone(), comps.complement(&part));
            if t.contains(&s) {
                out.push(s);
            }
        }
        Ok(out)
    }

    fn star_across_separators(&mut self, t: &Tangle, size: usize) -> Result<Vec<Separation>> {
        let mut out: Vec<Separation> = Vec::new();
        for _ in 0..4 * size {
            if out.len() >= size {
                break;
            }
            let comps = self.components(3)?;
            let d = self.selection(&comps);
            let s = Separation::new(comps.clone(), comps.complement(&d));
            if !t.contains(&s) {
                continue;
            }
            let mut trial = out.clone();
            trial.push(s);
            if is_star(&trial)? {
                out = trial;
            }
        }
        Ok(out)
    }

    /// A separation differing from `s` by finitely many vertices: `F` added
    /// to `B`, `F` added to both sides, or finite components moved from
    /// `B ∖ A` to `A ∖ B`.
    pub fn perturb(&mut self, s: &Separation) -> Result<Separation> {
        let k = self.rng.gen_range(1..=3);
        let f = SymVertexSet::from_vertices(self.pool.choose_multiple(&mut self.rng, k));
        match self.rng.gen_range(0..3) {
            0 => Separation::from_sides(&self.schema, s.a(), &s.b().union(&f)),
            1 => Separation::from_sides(&self.schema, &s.a().union(&f), &s.b().union(&f)),
            _ => {
                let comps = s.comps();
                let mut moved = Selection::default();
                if let Some(refs) = comps.refs(
                    &comps.clamp(&Selection {
                        concrete: s.to_b().concrete.clone(),
                        classes: s
                            .to_b()
                            .classes
                            .iter()
                            .map(|(&d, i)| (d, SemilinearSet::from_elements(i.elements_below(4))))
                            .collect(),
                    }),
                ) {
                    for r in refs {
                        if comps.component_is_finite(r) && self.rng.gen_bool(0.7) {
                            moved = moved.union(&comps.single(r));
                        }
                    }
                }
                Ok(Separation::new(comps.clone(), s.to_b().minus(&moved)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::find_schema;
    use crate::tangle::representative_tangles;
    use crate::ultrafilter::Policy;

    #[test]
    fn same_seed_same_samples() {
        let s = find_schema("SPIDER").unwrap();
        let mut a = Sampler::new(&s, 9, 6);
        let mut b = Sampler::new(&s, 9, 6);
        for _ in 0..20 {
            assert_eq!(
                a.separation(4).unwrap().text(),
                b.separation(4).unwrap().text()
            );
        }
    }

    #[test]
    fn stars_are_stars_inside_the_tangle() {
        for name in ["RAY", "STAR", "SPIDER", "CLIQRAY"] {
            let s = find_schema(name).unwrap();
            let mut smp = Sampler::new(&s, 1, 6);
            for t in representative_tangles(&s, Policy::Canonical) {
                for _ in 0..10 {
                    let star = smp.star_in(&t, 4).unwrap();
                    assert!(is_star(&star).unwrap());
                    assert!(star.iter().all(|x| t.contains(x)));
                }
            }
        }
    }

    #[test]
    fn perturbations_are_separations() {
        let s = find_schema("COMB").unwrap();
        let mut smp = Sampler::new(&s, 2, 6);
        for _ in 0..30 {
            let sep = smp.separation(3).unwrap();
            let p = smp.perturb(&sep).unwrap();
            assert!(p
                .a()
                .minus(sep.a())
                .union(&sep.a().minus(p.a()))
                .is_finite());
        }
    }
}
