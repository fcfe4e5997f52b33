//! Exhaustive separated filtrations indexed by the integers.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::mat::Mat;
use super::subspace::{Subquotient, Subspace};
use super::ExactError;

/// Whether steps grow or shrink as the index increases.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `step(k) ⊆ step(k+1)`, zero far below, full far above (weight style).
    Increasing,
    /// `step(p) ⊇ step(p+1)`, full far below, zero far above (Hodge style).
    Decreasing,
}

/// A filtration in canonical form: only jump indices are stored, every
/// listed step differs from its predecessor, and the final listed step is
/// the stable extreme (full space for increasing, zero for decreasing).
/// Structural equality is equality of filtrations.
#[derive(Clone, PartialEq, Eq)]
pub struct Filtration {
    ambient: usize,
    direction: Direction,
    steps: BTreeMap<i64, Subspace>,
    zero: Subspace,
    full: Subspace,
}

impl Filtration {
    /// Canonicalizes the given steps. Fails if they are not nested in the
    /// claimed direction or do not reach the stable extreme at the top
    /// index, since then the listed range would not contain every jump.
    pub fn from_steps(
        direction: Direction,
        ambient: usize,
        steps: impl IntoIterator<Item = (i64, Subspace)>,
    ) -> Result<Self, ExactError> {
        let zero = Subspace::zero(ambient);
        let full = Subspace::full(ambient);
        let given: BTreeMap<i64, Subspace> = steps.into_iter().collect();
        for s in given.values() {
            assert_eq!(s.ambient_dim(), ambient, "step ambient dimension mismatch");
        }
        let mut previous = match direction {
            Direction::Increasing => zero.clone(),
            Direction::Decreasing => full.clone(),
        };
        let mut normalized = BTreeMap::new();
        for (&k, space) in &given {
            let nested = match direction {
                Direction::Increasing => space.contains(&previous),
                Direction::Decreasing => previous.contains(space),
            };
            if !nested {
                return Err(ExactError::NotNested { index: k });
            }
            if *space != previous {
                normalized.insert(k, space.clone());
                previous = space.clone();
            }
        }
        let stable_ok = match direction {
            Direction::Increasing => previous == full,
            Direction::Decreasing => previous == zero,
        };
        if !stable_ok {
            // The top of the listed range must be the stable extreme;
            // anything else would hide a jump outside the listed indices.
            let top = given.keys().next_back().copied().unwrap_or(0);
            return Err(ExactError::NotNested { index: top + 1 });
        }
        Ok(Filtration { ambient, direction, steps: normalized, zero, full })
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// The step at any integer index, with the stabilized values outside
    /// the listed range.
    pub fn step(&self, k: i64) -> &Subspace {
        match self.steps.range(..=k).next_back() {
            Some((_, space)) => space,
            None => match self.direction {
                Direction::Increasing => &self.zero,
                Direction::Decreasing => &self.full,
            },
        }
    }

    /// The indices where the filtration jumps, in increasing order.
    pub fn jump_indices(&self) -> Vec<i64> {
        self.steps.keys().copied().collect()
    }

    pub fn dims(&self) -> Vec<(i64, usize)> {
        self.steps.iter().map(|(&k, s)| (k, s.dim())).collect()
    }

    /// Applies an invertible map to every step.
    pub fn apply(&self, m: &Mat) -> Result<Filtration, ExactError> {
        Filtration::from_steps(
            self.direction,
            m.rows(),
            self.steps.iter().map(|(&k, s)| (k, s.image_under(m))),
        )
    }

    /// Shifts every index by `delta`, so `shifted.step(k) = self.step(k - delta)`.
    pub fn shift(&self, delta: i64) -> Filtration {
        Filtration {
            ambient: self.ambient,
            direction: self.direction,
            steps: self.steps.iter().map(|(&k, s)| (k + delta, s.clone())).collect(),
            zero: self.zero.clone(),
            full: self.full.clone(),
        }
    }

    /// The filtration induced on a subquotient by intersecting steps and
    /// projecting.
    pub fn induce_on(&self, sq: &Subquotient) -> Filtration {
        let steps = self.steps.iter().map(|(&k, s)| (k, sq.project_subspace(s)));
        Filtration::from_steps(self.direction, sq.dim(), steps)
            .expect("induced filtration inherits nesting")
    }

    /// True when every step of `self` contains the same-index step of
    /// `other` (both must share direction and ambient space).
    pub fn contains_stepwise(&self, other: &Filtration) -> bool {
        assert_eq!(self.direction, other.direction, "direction mismatch");
        assert_eq!(self.ambient, other.ambient, "ambient mismatch");
        let mut indices = self.jump_indices();
        indices.extend(other.jump_indices());
        indices.iter().all(|&k| self.step(k).contains(other.step(k)))
    }
}

impl core::fmt::Debug for Filtration {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let arrow = match self.direction {
            Direction::Increasing => "incr",
            Direction::Decreasing => "decr",
        };
        write!(f, "Filtration[{arrow}, ambient {}; ", self.ambient)?;
        for (k, s) in &self.steps {
            write!(f, "{k}: dim {}, ", s.dim())?;
        }
        write!(f, "]")
    }
}
