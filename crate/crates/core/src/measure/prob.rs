use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::partition::{format_block, is_refinement, Partition};
use crate::rational::{display_rational, format_rational, int, sum, Rational};

/// A probability measure on a finite σ-algebra, given by its atom weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProbMeasure {
    base: Partition,
    weights: Vec<Rational>,
}

impl ProbMeasure {
    /// Validates shape, nonnegativity and normalization.
    pub fn new(base: Partition, weights: Vec<Rational>) -> Result<Self> {
        if weights.len() != base.num_atoms() {
            return Err(Error::Shape(format!(
                "{} weights for {} atoms",
                weights.len(),
                base.num_atoms()
            )));
        }
        check_distribution(&weights)?;
        Ok(ProbMeasure { base, weights })
    }

    /// Equal weight `1/k` on each of the `k` atoms.
    pub fn uniform(base: Partition) -> Self {
        let k = base.num_atoms() as i64;
        let weights = vec![Rational::one() / int(k); base.num_atoms()];
        ProbMeasure { base, weights }
    }

    /// All mass on one atom.
    pub fn point_mass(base: Partition, atom: usize) -> Result<Self> {
        if atom >= base.num_atoms() {
            return Err(Error::Shape(format!(
                "atom {atom} out of range for {} atoms",
                base.num_atoms()
            )));
        }
        let mut weights = vec![Rational::zero(); base.num_atoms()];
        weights[atom] = Rational::one();
        Ok(ProbMeasure { base, weights })
    }

    pub(crate) fn from_parts_unchecked(base: Partition, weights: Vec<Rational>) -> Self {
        debug_assert_eq!(weights.len(), base.num_atoms());
        ProbMeasure { base, weights }
    }

    pub fn base(&self) -> &Partition {
        &self.base
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, atom: usize) -> &Rational {
        &self.weights[atom]
    }

    /// Mass of the atom containing element `x`.
    pub fn weight_of_element_atom(&self, x: usize) -> &Rational {
        &self.weights[self.base.atom_of(x)]
    }

    /// Pushes the measure down to a coarsening: each coarse atom receives the
    /// total weight of the fine atoms it contains.
    pub fn restrict(&self, coarse: &Partition) -> Result<ProbMeasure> {
        let witness = is_refinement(coarse, &self.base)?.ok_or_else(|| Error::NotARefinement {
            coarse: coarse.to_string(),
            fine: self.base.to_string(),
        })?;
        let mut weights = vec![Rational::zero(); coarse.num_atoms()];
        for (fine_atom, &c) in witness.block_map.iter().enumerate() {
            weights[c] += &self.weights[fine_atom];
        }
        Ok(ProbMeasure {
            base: coarse.clone(),
            weights,
        })
    }

    /// Extends the measure to a refinement using conditional split weights.
    ///
    /// `split_weights` holds one vector per subdivided atom, in canonical
    /// atom order of the current base; each vector lists weights for the
    /// parts of that atom in canonical order of `fine`. Atoms that are not
    /// subdivided keep their weight and take no entry. A part receives
    /// `μ(A) · p_i`.
    pub fn extend_with_weights(
        &self,
        fine: &Partition,
        split_weights: &[Vec<Rational>],
    ) -> Result<ProbMeasure> {
        let witness = is_refinement(&self.base, fine)?.ok_or_else(|| Error::NotARefinement {
            coarse: self.base.to_string(),
            fine: fine.to_string(),
        })?;
        let mut weights = vec![Rational::zero(); fine.num_atoms()];
        let mut supplied = split_weights.iter();
        for c in 0..self.base.num_atoms() {
            let parts = witness.parts_of(c);
            if parts.len() == 1 {
                weights[parts[0]] = self.weights[c].clone();
                continue;
            }
            let split = supplied.next().ok_or_else(|| {
                Error::Shape(format!(
                    "no split weights for subdivided atom {}",
                    format_block(self.base.atom(c))
                ))
            })?;
            if split.len() != parts.len() {
                return Err(Error::Shape(format!(
                    "atom {} splits into {} parts but {} weights were given",
                    format_block(self.base.atom(c)),
                    parts.len(),
                    split.len()
                )));
            }
            check_distribution(split)?;
            for (&part, p) in parts.iter().zip(split) {
                weights[part] = &self.weights[c] * p;
            }
        }
        if supplied.next().is_some() {
            return Err(Error::Shape(format!(
                "more split-weight vectors than subdivided atoms ({} given)",
                split_weights.len()
            )));
        }
        Ok(ProbMeasure {
            base: fine.clone(),
            weights,
        })
    }

    /// Some atom carries all the mass.
    pub fn is_degenerate(&self) -> bool {
        self.weights.iter().any(|w| w.is_one())
    }

    /// Every atom has weight strictly between 0 and 1. Not the complement of
    /// [`is_degenerate`](Self::is_degenerate): a measure with a null atom and
    /// no unit atom is neither.
    pub fn is_nondegenerate(&self) -> bool {
        self.weights
            .iter()
            .all(|w| *w > Rational::zero() && *w < Rational::one())
    }

    /// Weights as `"num/den"` strings.
    pub fn weight_strings(&self) -> Vec<String> {
        self.weights.iter().map(format_rational).collect()
    }
}

/// Checks that weights are nonnegative and sum to exactly one.
pub fn check_distribution(weights: &[Rational]) -> Result<()> {
    if let Some((index, w)) = weights
        .iter()
        .enumerate()
        .find(|(_, w)| **w < Rational::zero())
    {
        return Err(Error::NegativeWeight {
            index,
            value: format_rational(w),
        });
    }
    let total = sum(weights);
    if !total.is_one() {
        return Err(Error::WeightSum {
            sum: format_rational(&total),
        });
    }
    Ok(())
}

/// `(1/3, 2/3)`.
impl fmt::Display for ProbMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, w) in self.weights.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(&display_rational(w))?;
        }
        f.write_str(")")
    }
}
