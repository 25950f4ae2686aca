//! Permutations of `0..n`.
//!
//! Composition follows the right-action convention: `p.then(&q)` first applies
//! `p`, then `q`, so `(p.then(&q)).apply(i) == q.apply(p.apply(i))`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("image list is not a permutation of 0..{0}")]
    NotABijection(usize),
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("malformed cycle notation: {0}")]
    Parse(String),
}

/// A permutation stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            images: (0..degree).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(PermError::NotABijection(n));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    /// Builds a permutation of `0..degree` from disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                if p >= degree {
                    return Err(PermError::PointOutOfRange { point: p, degree });
                }
                if touched[p] {
                    return Err(PermError::NotABijection(degree));
                }
                touched[p] = true;
                images[p] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Perm { images })
    }

    /// Parses cycle notation such as `(0 1 2)(3 4)`; `()` is the identity.
    /// The degree is the given minimum or one more than the largest point.
    pub fn parse_cycles(text: &str, min_degree: usize) -> Result<Self, PermError> {
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut rest = text.trim();
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| PermError::Parse(text.to_string()))?;
            let close = open
                .find(')')
                .ok_or_else(|| PermError::Parse(text.to_string()))?;
            let body = &open[..close];
            let cycle = body
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(|s| s.parse::<usize>().map_err(|_| PermError::Parse(text.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            rest = open[close + 1..].trim_start();
        }
        let degree = cycles
            .iter()
            .flatten()
            .map(|&p| p + 1)
            .max()
            .unwrap_or(0)
            .max(min_degree);
        let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
        Perm::from_cycles(degree, &refs)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: usize) -> usize {
        self.images[point]
    }

    #[inline]
    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            images: self.images.iter().map(|&i| other.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Perm { images }
    }

    /// Smallest point moved by the permutation.
    pub fn first_moved(&self) -> Option<usize> {
        self.images.iter().enumerate().find(|(i, j)| i != *j).map(|(i, _)| i)
    }

    /// Pads the permutation with fixed points up to `degree`.
    pub fn extend_to(&self, degree: usize) -> Perm {
        let mut images = self.images.clone();
        images.extend(self.degree()..degree);
        Perm { images }
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] || self.images[start] == start {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut p = self.images[start];
            while p != start {
                seen[p] = true;
                cycle.push(p);
                p = self.images[p];
            }
            out.push(cycle);
        }
        out
    }

    pub fn order(&self) -> usize {
        fn gcd(a: usize, b: usize) -> usize {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        self.cycles()
            .iter()
            .fold(1, |acc, c| acc / gcd(acc, c.len()) * c.len())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, p) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm[{}]{}", self.degree(), self)
    }
}

impl FromStr for Perm {
    type Err = PermError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Perm::parse_cycles(s, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_is_left_to_right() {
        let p = Perm::from_cycles(3, &[&[0, 1]]).unwrap();
        let q = Perm::from_cycles(3, &[&[1, 2]]).unwrap();
        // 0 -> 1 -> 2
        assert_eq!(p.then(&q).apply(0), 2);
        assert_eq!(q.then(&p).apply(0), 1);
    }

    #[test]
    fn parse_and_display() {
        let p: Perm = "(0 1 2)(3 4)".parse().unwrap();
        assert_eq!(p.degree(), 5);
        assert_eq!(p.to_string(), "(0 1 2)(3 4)");
        assert_eq!(p.order(), 6);
        assert!(Perm::parse_cycles("()", 3).unwrap().is_identity());
        assert!(Perm::parse_cycles("(0 1", 0).is_err());
        assert!(Perm::parse_cycles("(0 1)(1 2)", 0).is_err());
    }

    #[test]
    fn inverse_cancels() {
        let p: Perm = "(0 3 1)(2 4)".parse().unwrap();
        assert!(p.then(&p.inverse()).is_identity());
        assert!(p.inverse().then(&p).is_identity());
    }

    #[test]
    fn rejects_non_bijection() {
        assert!(Perm::from_images(vec![0, 0, 1]).is_err());
        assert!(Perm::from_images(vec![0, 3, 1]).is_err());
    }
}
