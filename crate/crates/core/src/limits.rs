//! Desk-scale limits guarding exhaustive computations.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Limits {
    /// Largest field (or extension field) built with full log tables.
    pub max_field_size: u64,
    /// Largest group enumerated element by element.
    pub max_group_elements: u64,
    /// Largest group for which every pair of elements is closed into a subgroup.
    pub max_pair_group: u64,
    /// Largest permutation degree q^n - 1 handed to Schreier-Sims.
    pub max_points: u64,
    /// Largest number of conjugacy class labels enumerated.
    pub max_labels: u64,
    /// Largest number of polynomials scanned when enumerating irreducibles.
    pub max_poly_scan: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_field_size: 1 << 20,
            max_group_elements: 10_000_000,
            max_pair_group: 5_000,
            max_points: 100_000,
            max_labels: 1_000_000,
            max_poly_scan: 1 << 22,
        }
    }
}

impl Limits {
    /// Multiplies every limit by `factor` (saturating); used by the CLI's scale override.
    pub fn scaled(self, factor: f64) -> Self {
        let s = |v: u64| ((v as f64) * factor).clamp(1.0, u64::MAX as f64) as u64;
        Limits {
            max_field_size: s(self.max_field_size),
            max_group_elements: s(self.max_group_elements),
            max_pair_group: s(self.max_pair_group),
            max_points: s(self.max_points),
            max_labels: s(self.max_labels),
            max_poly_scan: s(self.max_poly_scan),
        }
    }
}

static GLOBAL: std::sync::RwLock<Option<Limits>> = std::sync::RwLock::new(None);

/// Limits in force for this process (defaults unless overridden with [`set_global`]).
pub fn current() -> Limits {
    GLOBAL
        .read()
        .map(|g| g.unwrap_or_default())
        .unwrap_or_default()
}

pub fn set_global(limits: Limits) {
    if let Ok(mut g) = GLOBAL.write() {
        *g = Some(limits);
    }
}
