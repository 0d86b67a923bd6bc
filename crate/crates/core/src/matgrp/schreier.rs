//! Base and strong generating set for a matrix group acting on the nonzero
//! vectors of F_q^n. The base is the standard basis, so a group element is
//! determined by its base images and sifting only ever tracks those.

use std::collections::HashSet;

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::group::{decode_vector, encode_vector, group_order, GroupKind};
use super::Matrix;
use crate::error::{Error, Result};
use crate::ff::Field;
use crate::limits;
use crate::numth::{self, BigNat};

type Perm = Vec<u32>;

const NONE: u32 = u32::MAX;
const ROOT: u32 = u32::MAX - 1;
const RANDOM_SEED: u64 = 0x5c4e_1e55;
const QUIET_ROUNDS: usize = 40;

#[derive(Debug, Clone)]
struct Level {
    base_point: u32,
    orbit: Vec<u32>,
    /// Generator index whose application produced the point, ROOT for the
    /// base point, NONE outside the orbit.
    label: Vec<u32>,
}

#[derive(Debug, Clone)]
pub struct StabChain {
    n: usize,
    field: Field,
    degree: usize,
    gens: Vec<Perm>,
    inverses: Vec<Perm>,
    /// Number of leading base points fixed by each strong generator.
    depth: Vec<usize>,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn build(generators: &[Matrix], n: usize, field: &Field) -> Result<StabChain> {
        let q = field.size() as u64;
        let points = (q as u128).pow(n as u32) - 1;
        let cap = limits::current().max_points;
        if points > cap as u128 {
            return Err(Error::limit("permutation degree q^n - 1", points, cap));
        }
        let mut det_order = BigNat::one();
        for g in generators {
            if g.n() != n {
                return Err(Error::DimensionMismatch(format!(
                    "generator is {}x{}, expected {n}x{n}",
                    g.n(),
                    g.n()
                )));
            }
            let det = g.det(field);
            if det == 0 {
                return Err(Error::SingularMatrix);
            }
            det_order = numth::lcm(&det_order, &BigNat::from(field.order(det)));
        }
        let degree = points as usize;
        let levels = (0..n)
            .map(|k| {
                let base_point = (q as u32).pow(k as u32) - 1;
                let mut label = vec![NONE; degree];
                label[base_point as usize] = ROOT;
                Level {
                    base_point,
                    orbit: vec![base_point],
                    label,
                }
            })
            .collect();
        let mut chain = StabChain {
            n,
            field: field.clone(),
            degree,
            gens: Vec::new(),
            inverses: Vec::new(),
            depth: Vec::new(),
            levels,
        };
        let perms: Vec<Perm> = generators
            .iter()
            .filter(|g| !g.is_identity())
            .map(|g| chain.matrix_perm(g))
            .collect();
        if perms.is_empty() {
            return Ok(chain);
        }
        for p in &perms {
            if chain.sift_perm(p).is_some() {
                chain.add_generator(p.clone());
            }
        }
        let upper = group_order(GroupKind::SL, n, q)? * det_order;
        chain.random_phase(&perms, &upper);
        if chain.order() < upper {
            chain.verify();
        }
        Ok(chain)
    }

    pub fn order(&self) -> BigNat {
        self.levels
            .iter()
            .fold(BigNat::one(), |acc, l| acc * BigNat::from(l.orbit.len()))
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn strong_generator_count(&self) -> usize {
        self.gens.len()
    }

    pub fn contains(&self, g: &Matrix) -> Result<bool> {
        if g.n() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "expected {}x{} matrix",
                self.n, self.n
            )));
        }
        if !g.is_invertible(&self.field) {
            return Ok(false);
        }
        let q = self.field.size();
        let images: Vec<u32> = self
            .levels
            .iter()
            .map(|l| {
                let v = decode_vector(l.base_point + 1, self.n, q);
                encode_vector(&g.apply(&v, &self.field), q) - 1
            })
            .collect();
        Ok(self.sift_images(images, 0).is_none())
    }

    fn matrix_perm(&self, g: &Matrix) -> Perm {
        let q = self.field.size();
        (1..=self.degree as u32)
            .map(|code| {
                let v = decode_vector(code, self.n, q);
                encode_vector(&g.apply(&v, &self.field), q) - 1
            })
            .collect()
    }

    /// u_beta^{-1}(x) at `level`.
    fn unwind(&self, level: usize, mut beta: u32, mut x: u32) -> u32 {
        let l = &self.levels[level];
        loop {
            let s = l.label[beta as usize];
            if s == ROOT {
                return x;
            }
            let inv = &self.inverses[s as usize];
            x = inv[x as usize];
            beta = inv[beta as usize];
        }
    }

    /// Generator indices along the path from the base point to beta.
    fn path(&self, level: usize, mut beta: u32) -> Vec<usize> {
        let l = &self.levels[level];
        let mut out = Vec::new();
        loop {
            let s = l.label[beta as usize];
            if s == ROOT {
                out.reverse();
                return out;
            }
            out.push(s as usize);
            beta = self.inverses[s as usize][beta as usize];
        }
    }

    fn forward(&self, path: &[usize], mut x: u32) -> u32 {
        for &s in path {
            x = self.gens[s][x as usize];
        }
        x
    }

    /// Sifts an element given by its base images, starting at `from` (the
    /// element must fix the earlier base points). Returns the first level
    /// whose orbit misses the current image, with the images so far.
    fn sift_images(&self, mut images: Vec<u32>, from: usize) -> Option<(usize, Vec<u32>)> {
        for j in from..self.n {
            let beta = images[j];
            if self.levels[j].label[beta as usize] == NONE {
                return Some((j, images));
            }
            for k in j..self.n {
                images[k] = self.unwind(j, beta, images[k]);
            }
        }
        None
    }

    /// Full residue of a permutation after sifting, or None when it sifts
    /// to the identity.
    fn sift_perm(&self, h: &Perm) -> Option<Perm> {
        let images: Vec<u32> = self.levels.iter().map(|l| h[l.base_point as usize]).collect();
        let (fail, _) = self.sift_images(images, 0)?;
        Some(self.residue(h.clone(), 0, fail))
    }

    /// Divides out transversal elements for levels from..to.
    fn residue(&self, mut h: Perm, from: usize, to: usize) -> Perm {
        for j in from..to {
            let beta = h[self.levels[j].base_point as usize];
            for x in h.iter_mut() {
                *x = self.unwind(j, beta, *x);
            }
        }
        h
    }

    fn add_generator(&mut self, g: Perm) {
        let depth = self
            .levels
            .iter()
            .take_while(|l| g[l.base_point as usize] == l.base_point)
            .count();
        let mut inv = vec![0; g.len()];
        for (x, &y) in g.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        self.gens.push(g);
        self.inverses.push(inv);
        self.depth.push(depth);
        for level in 0..=depth.min(self.n - 1) {
            self.extend_orbit(level);
        }
    }

    /// Grows the orbit under the level's generators without relabelling
    /// points already reached, so transversal elements never change.
    fn extend_orbit(&mut self, level: usize) {
        let gens: Vec<usize> = (0..self.gens.len()).filter(|&s| self.depth[s] >= level).collect();
        let l = &mut self.levels[level];
        let mut i = 0;
        while i < l.orbit.len() {
            let x = l.orbit[i] as usize;
            for &s in &gens {
                let y = self.gens[s][x];
                if l.label[y as usize] == NONE {
                    l.label[y as usize] = s as u32;
                    l.orbit.push(y);
                }
            }
            i += 1;
        }
    }

    fn random_phase(&mut self, perms: &[Perm], upper: &BigNat) {
        let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
        let mut slots: Vec<Perm> = (0..perms.len().max(10))
            .map(|i| perms[i % perms.len()].clone())
            .collect();
        let mut acc: Perm = (0..self.degree as u32).collect();
        let compose = |a: &Perm, b: &Perm| -> Perm { a.iter().map(|&x| b[x as usize]).collect() };
        let step = |rng: &mut ChaCha8Rng, slots: &mut Vec<Perm>, acc: &mut Perm| {
            let i = rng.random_range(0..slots.len());
            let mut j = rng.random_range(0..slots.len() - 1);
            if j >= i {
                j += 1;
            }
            slots[i] = compose(&slots[i], &slots[j]);
            *acc = compose(acc, &slots[i]);
        };
        for _ in 0..30 {
            step(&mut rng, &mut slots, &mut acc);
        }
        let mut quiet = 0;
        while quiet < QUIET_ROUNDS && &self.order() < upper {
            step(&mut rng, &mut slots, &mut acc);
            match self.sift_perm(&acc) {
                Some(residue) => {
                    self.add_generator(residue);
                    quiet = 0;
                }
                None => quiet += 1,
            }
        }
    }

    /// Deterministic completion: every Schreier generator of every level must
    /// sift through the levels below it.
    fn verify(&mut self) {
        let mut checked: Vec<HashSet<(u32, usize)>> = vec![HashSet::new(); self.n];
        let mut i = self.n;
        'outer: while i > 0 {
            let level = i - 1;
            let mut idx = 0;
            while idx < self.levels[level].orbit.len() {
                let beta = self.levels[level].orbit[idx];
                let path = self.path(level, beta);
                for s in 0..self.gens.len() {
                    if self.depth[s] < level || !checked[level].insert((beta, s)) {
                        continue;
                    }
                    let sb = self.gens[s][beta as usize];
                    let schreier = |x: u32| self.unwind(level, sb, self.gens[s][self.forward(&path, x) as usize]);
                    let images: Vec<u32> = self.levels.iter().map(|l| schreier(l.base_point)).collect();
                    if let Some((fail, _)) = self.sift_images(images, level + 1) {
                        let full: Perm = (0..self.degree as u32).map(schreier).collect();
                        let res = self.residue(full, level + 1, fail);
                        self.add_generator(res);
                        i = fail + 1;
                        continue 'outer;
                    }
                }
                idx += 1;
            }
            i -= 1;
        }
    }
}
