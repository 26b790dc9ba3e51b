//! Rim phase profiles.
//!
//! Each rim vertex carries a reflection phase `phi` from a small set of
//! classes. The default constructor lays classes out as contiguous blocks;
//! an explicit per-vertex constructor handles arbitrary layouts. Phase
//! factors `exp(i*phi)` are computed once per vertex at construction, never
//! per step.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::{PI, TAU};

/// One phase class: a reflection phase and how many rim vertices carry it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseClass {
    /// Reflection phase, normalized into `(-pi, pi]`.
    pub phase: f64,
    /// Number of rim vertices in the class, at least one.
    pub count: usize,
}

/// Assignment of reflection phases to the `N` rim vertices of a star graph.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseProfile {
    classes: Vec<PhaseClass>,
    vertex_class: Vec<u32>,
    phase_factors: Vec<Complex64>,
}

/// Maps any angle onto the canonical interval `(-pi, pi]`.
///
/// Values already inside the interval pass through bit-exact, so phases
/// parsed as rational multiples of pi are never perturbed.
pub fn normalize_phase(phase: f64) -> f64 {
    if phase > -PI && phase <= PI {
        return phase;
    }
    let wrapped = phase.rem_euclid(TAU);
    if wrapped > PI {
        wrapped - TAU
    } else {
        wrapped
    }
}

impl PhaseProfile {
    /// Builds a profile from ordered `(phase, count)` classes laid out as
    /// contiguous vertex blocks.
    ///
    /// # Errors
    ///
    /// `InvalidDimension` when no class is given or a count is zero;
    /// `InvalidArgument` when two classes normalize to the same phase or a
    /// phase is not finite.
    pub fn from_classes(classes: &[(f64, usize)]) -> Result<Self> {
        if classes.is_empty() {
            return Err(Error::InvalidDimension(
                "a profile needs at least one phase class".into(),
            ));
        }
        let mut normd = Vec::with_capacity(classes.len());
        for &(phase, count) in classes {
            if !phase.is_finite() {
                return Err(Error::InvalidArgument("phase must be finite".into()));
            }
            if count == 0 {
                return Err(Error::InvalidDimension(
                    "every phase class needs at least one vertex".into(),
                ));
            }
            normd.push(PhaseClass {
                phase: normalize_phase(phase),
                count,
            });
        }
        for (i, a) in normd.iter().enumerate() {
            for b in normd.iter().skip(i + 1) {
                if a.phase == b.phase {
                    return Err(Error::InvalidArgument(format!(
                        "duplicate class phase {}",
                        a.phase
                    )));
                }
            }
        }
        let n: usize = normd.iter().map(|c| c.count).sum();
        let mut vertex_class = Vec::with_capacity(n);
        let mut phase_factors = Vec::with_capacity(n);
        for (ci, class) in normd.iter().enumerate() {
            let factor = Complex64::from_polar(1.0, class.phase);
            for _ in 0..class.count {
                vertex_class.push(ci as u32);
                phase_factors.push(factor);
            }
        }
        Ok(Self {
            classes: normd,
            vertex_class,
            phase_factors,
        })
    }

    /// Builds a profile from one phase per vertex, in vertex order.
    ///
    /// Classes are formed by exact equality of the normalized phases, ordered
    /// by first occurrence; the layout may interleave classes arbitrarily.
    ///
    /// # Errors
    ///
    /// `InvalidDimension` for an empty slice, `InvalidArgument` for a
    /// non-finite phase.
    pub fn from_vertex_phases(phases: &[f64]) -> Result<Self> {
        if phases.is_empty() {
            return Err(Error::InvalidDimension(
                "a profile needs at least one vertex".into(),
            ));
        }
        let mut classes: Vec<PhaseClass> = Vec::new();
        let mut vertex_class = Vec::with_capacity(phases.len());
        let mut phase_factors = Vec::with_capacity(phases.len());
        for &raw in phases {
            if !raw.is_finite() {
                return Err(Error::InvalidArgument("phase must be finite".into()));
            }
            let phase = normalize_phase(raw);
            let ci = match classes.iter().position(|c| c.phase == phase) {
                Some(ci) => {
                    classes[ci].count += 1;
                    ci
                }
                None => {
                    classes.push(PhaseClass { phase, count: 1 });
                    classes.len() - 1
                }
            };
            vertex_class.push(ci as u32);
            phase_factors.push(Complex64::from_polar(1.0, phase));
        }
        Ok(Self {
            classes,
            vertex_class,
            phase_factors,
        })
    }

    /// Number of rim vertices.
    pub fn n(&self) -> usize {
        self.vertex_class.len()
    }

    /// The phase classes in construction order.
    pub fn classes(&self) -> &[PhaseClass] {
        &self.classes
    }

    /// Class index of vertex `j` (vertices are indexed from zero).
    pub fn class_of(&self, j: usize) -> usize {
        self.vertex_class[j] as usize
    }

    /// Precomputed `exp(i*phi_j)` for vertex `j`.
    pub fn phase_factor(&self, j: usize) -> Complex64 {
        self.phase_factors[j]
    }

    /// All precomputed per-vertex phase factors.
    pub fn phase_factors(&self) -> &[Complex64] {
        &self.phase_factors
    }

    /// Vertices belonging to class `class_index`.
    pub fn class_vertices(&self, class_index: usize) -> impl Iterator<Item = usize> + '_ {
        let want = class_index as u32;
        self.vertex_class
            .iter()
            .enumerate()
            .filter_map(move |(j, &c)| (c == want).then_some(j))
    }

    /// Index of a class with the given normalized phase, if present.
    pub fn class_with_phase(&self, phase: f64) -> Option<usize> {
        let phase = normalize_phase(phase);
        self.classes.iter().position(|c| c.phase == phase)
    }

    /// `(phase, count)` pairs, the grouped form used by the spectral module.
    pub fn grouped_counts(&self) -> Vec<(f64, usize)> {
        self.classes.iter().map(|c| (c.phase, c.count)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalize_keeps_interval_values_bit_exact() {
        for &p in &[0.0, PI, -PI + 1e-15, 2.0 * PI / 3.0, -2.0 * PI / 3.0] {
            assert_eq!(normalize_phase(p), p);
        }
    }

    #[test]
    fn normalize_wraps_and_maps_minus_pi_up() {
        assert_eq!(normalize_phase(-PI), PI);
        let w = normalize_phase(2.0 * PI + 0.25);
        assert!((w - 0.25).abs() < 1e-12);
        let w = normalize_phase(-4.0 * PI / 3.0);
        assert!((w - 2.0 * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn block_layout_and_lookup() {
        let p = PhaseProfile::from_classes(&[(PI, 1), (0.0, 3)]).unwrap();
        assert_eq!(p.n(), 4);
        assert_eq!(p.class_of(0), 0);
        assert_eq!(p.class_of(3), 1);
        assert_eq!(p.phase_factor(0), Complex64::from_polar(1.0, PI));
        assert_eq!(p.class_vertices(1).collect::<Vec<_>>(), vec![1, 2, 3]);
    }

    #[test]
    fn per_vertex_layout_groups_by_first_occurrence() {
        let p = PhaseProfile::from_vertex_phases(&[0.0, PI, 0.0, PI, 0.0]).unwrap();
        assert_eq!(p.classes().len(), 2);
        assert_eq!(
            p.classes()[0],
            PhaseClass {
                phase: 0.0,
                count: 3
            }
        );
        assert_eq!(
            p.classes()[1],
            PhaseClass {
                phase: PI,
                count: 2
            }
        );
        assert_eq!(p.class_of(3), 1);
    }

    #[test]
    fn rejects_empty_zero_count_and_duplicates() {
        assert!(matches!(
            PhaseProfile::from_classes(&[]),
            Err(Error::InvalidDimension(_))
        ));
        assert!(matches!(
            PhaseProfile::from_classes(&[(0.0, 0)]),
            Err(Error::InvalidDimension(_))
        ));
        // 2pi normalizes onto 0, colliding with the first class.
        assert!(matches!(
            PhaseProfile::from_classes(&[(0.0, 1), (TAU, 1)]),
            Err(Error::InvalidArgument(_))
        ));
    }
}
