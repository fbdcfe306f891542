use std::fmt;
use std::ops::{Add, Index};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of ℕ^k: the number of edges of each color in a path.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Degree(Vec<u32>);

impl Degree {
    pub fn new(entries: Vec<u32>) -> Self {
        Degree(entries)
    }

    pub fn zero(k: usize) -> Self {
        Degree(vec![0; k])
    }

    /// The standard basis vector e_color (zero-based color).
    pub fn unit(k: usize, color: usize) -> Self {
        let mut d = vec![0; k];
        d[color] = 1;
        Degree(d)
    }

    /// Every entry equal to `value`.
    pub fn constant(k: usize, value: u32) -> Self {
        Degree(vec![value; k])
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Componentwise partial order.
    pub fn le(&self, other: &Degree) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn join(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| *a.max(b)).collect())
    }

    /// `self - lower`, failing unless `lower <= self`.
    pub fn checked_sub(&self, lower: &Degree) -> Result<Degree> {
        if !lower.le(self) {
            return Err(Error::DegreeRange {
                lower: lower.clone(),
                upper: self.clone(),
            });
        }
        Ok(Degree(self.0.iter().zip(&lower.0).map(|(a, b)| a - b).collect()))
    }

    pub fn scale(&self, n: u32) -> Degree {
        Degree(self.0.iter().map(|x| x * n).collect())
    }

    /// If `self = n * base` for some integer n >= 1, returns n.
    pub fn multiple_of(&self, base: &Degree) -> Option<u32> {
        if self.k() != base.k() || base.is_zero() {
            return None;
        }
        let mut factor = None;
        for (a, b) in self.0.iter().zip(&base.0) {
            match (*b, factor) {
                (0, _) if *a != 0 => return None,
                (0, _) => {}
                (b, None) => {
                    if a % b != 0 {
                        return None;
                    }
                    factor = Some(a / b);
                }
                (b, Some(f)) => {
                    if *a != f * b {
                        return None;
                    }
                }
            }
        }
        factor.filter(|&f| f >= 1)
    }

    /// All degrees `d` with `0 <= d <= self`, in lexicographic order.
    pub fn below(&self) -> Vec<Degree> {
        let mut out = vec![Vec::with_capacity(self.k())];
        for &bound in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..=bound).map(move |x| {
                        let mut p = prefix.clone();
                        p.push(x);
                        p
                    })
                })
                .collect();
        }
        out.into_iter().map(Degree).collect()
    }

    /// Graded-lexicographic comparison key: total first, then entries.
    pub fn graded_key(&self) -> (u32, Vec<u32>) {
        (self.total(), self.0.clone())
    }

    /// Parses `a,b,c`.
    pub fn parse(s: &str) -> Result<Degree> {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::Parse(format!("bad degree entry `{t}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Degree)
    }
}

impl Add for &Degree {
    type Output = Degree;

    fn add(self, rhs: &Degree) -> Degree {
        Degree(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Index<usize> for Degree {
    type Output = u32;

    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_and_join() {
        let a = Degree::new(vec![1, 2]);
        let b = Degree::new(vec![2, 1]);
        assert!(!a.le(&b) && !b.le(&a));
        assert_eq!(a.join(&b), Degree::new(vec![2, 2]));
        assert!(Degree::zero(2).le(&a));
    }

    #[test]
    fn sub_rejects_incomparable() {
        let a = Degree::new(vec![1, 2]);
        let b = Degree::new(vec![2, 1]);
        assert!(a.checked_sub(&b).is_err());
        assert_eq!(
            a.checked_sub(&Degree::new(vec![1, 0])).unwrap(),
            Degree::new(vec![0, 2])
        );
    }

    #[test]
    fn multiples() {
        let j = Degree::new(vec![1, 2]);
        assert_eq!(Degree::new(vec![3, 6]).multiple_of(&j), Some(3));
        assert_eq!(Degree::new(vec![3, 5]).multiple_of(&j), None);
        assert_eq!(Degree::new(vec![0, 0]).multiple_of(&j), None);
    }

    #[test]
    fn below_enumerates_box() {
        let all = Degree::new(vec![1, 2]).below();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], Degree::zero(2));
        assert_eq!(all[5], Degree::new(vec![1, 2]));
    }

    #[test]
    fn parse_and_display() {
        let d = Degree::parse("1, 2").unwrap();
        assert_eq!(d.to_string(), "(1,2)");
        assert!(Degree::parse("1,x").is_err());
    }
}
