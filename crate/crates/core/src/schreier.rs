//! Incremental Schreier-Sims stabilizer chains.
//!
//! A [`StabChain`] answers exact order and membership queries for the group
//! generated by a set of permutations without materializing its elements.
//! Degrees in this crate stay small (at most 64 points), so the
//! implementation favors clarity: transversals are rebuilt from scratch
//! whenever a level gains a generator.

use crate::perm::Perm;

#[derive(Clone)]
pub(crate) struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

#[derive(Clone)]
struct Level {
    base_point: usize,
    gens: Vec<Perm>,
    /// `transversal[p]` holds a representative mapping `base_point` to `p`.
    transversal: Vec<Option<Perm>>,
}

impl Level {
    fn new(base_point: usize, degree: usize) -> Level {
        Level {
            base_point,
            gens: Vec::new(),
            transversal: vec![None; degree],
        }
    }

    fn orbit_len(&self) -> usize {
        self.transversal.iter().filter(|t| t.is_some()).count()
    }

    fn rebuild_orbit(&mut self, degree: usize) {
        self.transversal = vec![None; degree];
        self.transversal[self.base_point] = Some(Perm::identity(degree));
        let mut queue = vec![self.base_point];
        while let Some(p) = queue.pop() {
            let rep = self.transversal[p].clone().unwrap();
            for gen in &self.gens {
                let q = gen.apply(p);
                if self.transversal[q].is_none() {
                    self.transversal[q] = Some(rep.then(gen));
                    queue.push(q);
                }
            }
        }
    }
}

impl StabChain {
    pub fn new(degree: usize, gens: &[Perm]) -> StabChain {
        let mut chain = StabChain {
            degree,
            levels: Vec::new(),
        };
        for gen in gens {
            assert_eq!(gen.degree(), degree, "generator degree mismatch");
            chain.extend_at(0, gen.clone());
        }
        chain
    }

    /// Group order as a product of orbit lengths; `None` on u128 overflow.
    pub fn order(&self) -> Option<u128> {
        let mut order: u128 = 1;
        for level in &self.levels {
            order = order.checked_mul(level.orbit_len() as u128)?;
        }
        Some(order)
    }

    pub fn contains(&self, perm: &Perm) -> bool {
        if perm.degree() != self.degree {
            return false;
        }
        self.sift_from(0, perm.clone()).1.is_identity()
    }

    /// Strips transversal representatives starting at `level`. Returns the
    /// level where sifting stopped and the remaining residue.
    fn sift_from(&self, level: usize, perm: Perm) -> (usize, Perm) {
        let mut residue = perm;
        let mut at = level;
        while at < self.levels.len() {
            let lvl = &self.levels[at];
            let image = residue.apply(lvl.base_point);
            match &lvl.transversal[image] {
                Some(rep) => residue = residue.then(&rep.inverse()),
                None => break,
            }
            at += 1;
        }
        (at, residue)
    }

    /// Adds `perm` as a generator at `level` unless the chain from that
    /// level down already represents it. `perm` must fix the base points of
    /// all earlier levels.
    fn extend_at(&mut self, level: usize, perm: Perm) {
        if self.sift_from(level, perm.clone()).1.is_identity() {
            return;
        }
        if level == self.levels.len() {
            let base = perm.moved_points()[0];
            self.levels.push(Level::new(base, self.degree));
        }
        self.levels[level].gens.push(perm);
        self.close_level(level);
    }

    /// Re-establishes strongness at `level`: rebuilds its orbit and pushes
    /// every Schreier generator into the deeper chain.
    fn close_level(&mut self, level: usize) {
        self.levels[level].rebuild_orbit(self.degree);
        let gens = self.levels[level].gens.clone();
        let points: Vec<usize> = (0..self.degree)
            .filter(|&p| self.levels[level].transversal[p].is_some())
            .collect();
        for p in points {
            let rep = self.levels[level].transversal[p].clone().unwrap();
            for gen in &gens {
                let target = self.levels[level].transversal[gen.apply(p)]
                    .clone()
                    .unwrap();
                let schreier = rep.then(gen).then(&target.inverse());
                self.extend_at(level + 1, schreier);
            }
        }
    }
}
