//! Permutations of the fixed domain `{0, 1, ..., degree-1}`.
//!
//! A [`Perm`] stores its image table densely, so application is one array
//! lookup. Composition uses the left-to-right convention throughout the
//! crate: `(p.then(q))(x) = q(p(x))`.

use std::fmt;

use thiserror::Error;

/// Largest supported domain size. Image tables store `u16` entries.
pub const MAX_DEGREE: usize = u16::MAX as usize;

/// Errors from constructing a [`Perm`] out of raw images.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PermError {
    #[error("degree {0} exceeds the supported maximum of {MAX_DEGREE}")]
    DegreeTooLarge(usize),
    #[error("image {image} is out of range for degree {degree}")]
    ImageOutOfRange { image: usize, degree: usize },
    #[error("image {0} appears more than once")]
    DuplicateImage(usize),
}

/// A permutation of `{0, ..., degree-1}`, stored as its image table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Box<[u16]>,
}

impl Perm {
    /// The identity permutation on `degree` points.
    pub fn identity(degree: usize) -> Perm {
        assert!(degree <= MAX_DEGREE, "degree {degree} too large");
        Perm {
            images: (0..degree as u16).collect(),
        }
    }

    /// Builds a permutation from the table `images[x] = p(x)`, checking that
    /// it is a bijection on `{0, ..., images.len()-1}`.
    pub fn from_images(images: &[usize]) -> Result<Perm, PermError> {
        let degree = images.len();
        if degree > MAX_DEGREE {
            return Err(PermError::DegreeTooLarge(degree));
        }
        let mut seen = vec![false; degree];
        let mut table = Vec::with_capacity(degree);
        for &image in images {
            if image >= degree {
                return Err(PermError::ImageOutOfRange { image, degree });
            }
            if seen[image] {
                return Err(PermError::DuplicateImage(image));
            }
            seen[image] = true;
            table.push(image as u16);
        }
        Ok(Perm {
            images: table.into_boxed_slice(),
        })
    }

    /// Number of points in the domain.
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Applies the permutation to one point.
    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    /// The raw image table.
    pub fn images(&self) -> &[u16] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(x, &y)| x == y as usize)
    }

    /// Left-to-right composition: `(p.then(q))(x) = q(p(x))`.
    ///
    /// Panics if the degrees differ.
    pub fn then(&self, next: &Perm) -> Perm {
        assert_eq!(
            self.degree(),
            next.degree(),
            "composed permutations must share a degree"
        );
        Perm {
            images: self
                .images
                .iter()
                .map(|&y| next.images[y as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u16; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y as usize] = x as u16;
        }
        Perm {
            images: images.into_boxed_slice(),
        }
    }

    /// The conjugate `g^-1 * self * g` (apply `g^-1`, then `self`, then `g`).
    ///
    /// Relabels `self` along `g`: if `self` maps `x` to `y`, the conjugate
    /// maps `g(x)` to `g(y)`.
    pub fn conjugated_by(&self, g: &Perm) -> Perm {
        assert_eq!(self.degree(), g.degree(), "conjugation needs equal degrees");
        let mut images = vec![0u16; self.degree()];
        for (x, &y) in self.images.iter().enumerate() {
            images[g.images[x] as usize] = g.images[y as usize];
        }
        Perm {
            images: images.into_boxed_slice(),
        }
    }

    /// Multiplicative order: least `w >= 1` with `self^w` the identity.
    pub fn order(&self) -> u128 {
        let mut order: u128 = 1;
        for cycle in self.cycles() {
            order = lcm(order, cycle.len() as u128);
        }
        order
    }

    /// Points moved by the permutation, ascending.
    pub fn moved_points(&self) -> Vec<usize> {
        self.images
            .iter()
            .enumerate()
            .filter(|&(x, &y)| x != y as usize)
            .map(|(x, _)| x)
            .collect()
    }

    /// The nontrivial cycles, each starting at its least point, sorted by
    /// that least point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut cycles = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut point = self.apply(start);
            while point != start {
                seen[point] = true;
                cycle.push(point);
                point = self.apply(point);
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// Multiset of nontrivial cycle lengths, ascending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lengths: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        lengths.sort_unstable();
        lengths
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (i, point) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{point}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm[{self}]")
    }
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u128, b: u128) -> u128 {
    a / gcd(a, b) * b
}
