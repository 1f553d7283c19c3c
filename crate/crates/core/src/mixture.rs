//! Species data and validated mixture parameters.
//!
//! A mixture is a list of named species with molecular masses plus the shared
//! thermodynamic state (temperature, Boltzmann constant, total molar
//! concentration). Everything downstream reads masses and kT from here.

use crate::error::{Error, Result};

/// One gas species: a unique name and a positive molecular mass.
#[derive(Debug, Clone, PartialEq)]
pub struct Species {
    pub name: String,
    pub mass: f64,
}

impl Species {
    pub fn new(name: impl Into<String>, mass: f64) -> Self {
        Species {
            name: name.into(),
            mass,
        }
    }
}

/// Validated mixture: at least two species, distinct names, positive masses,
/// positive temperature / Boltzmann constant / total concentration.
#[derive(Debug, Clone)]
pub struct MixtureSpec {
    species: Vec<Species>,
    temperature: f64,
    boltzmann_k: f64,
    total_concentration: f64,
}

impl MixtureSpec {
    /// Validates and builds the mixture. Reports the first violated invariant.
    pub fn new(
        species: Vec<Species>,
        temperature: f64,
        boltzmann_k: f64,
        total_concentration: f64,
    ) -> Result<Self> {
        if species.len() < 2 {
            return Err(Error::TooFewSpecies {
                count: species.len(),
            });
        }
        for s in &species {
            if !(s.mass > 0.0) || !s.mass.is_finite() {
                return Err(Error::NonpositiveMass {
                    name: s.name.clone(),
                    value: s.mass,
                });
            }
        }
        for (k, s) in species.iter().enumerate() {
            if species[..k].iter().any(|t| t.name == s.name) {
                return Err(Error::DuplicateSpeciesName {
                    name: s.name.clone(),
                });
            }
        }
        if !(temperature > 0.0) || !temperature.is_finite() {
            return Err(Error::NonpositiveTemperature { value: temperature });
        }
        if !(boltzmann_k > 0.0) || !boltzmann_k.is_finite() {
            return Err(Error::NonpositiveBoltzmann { value: boltzmann_k });
        }
        if !(total_concentration > 0.0) || !total_concentration.is_finite() {
            return Err(Error::NonpositiveTotalConcentration {
                value: total_concentration,
            });
        }
        Ok(MixtureSpec {
            species,
            temperature,
            boltzmann_k,
            total_concentration,
        })
    }

    /// Two-species helper with unit temperature, Boltzmann constant and
    /// total concentration; used heavily in tests.
    pub fn binary_unit(m1: f64, m2: f64) -> Result<Self> {
        MixtureSpec::new(
            vec![Species::new("1", m1), Species::new("2", m2)],
            1.0,
            1.0,
            1.0,
        )
    }

    pub fn species(&self) -> &[Species] {
        &self.species
    }

    /// Number of species I.
    pub fn len(&self) -> usize {
        self.species.len()
    }

    pub fn is_empty(&self) -> bool {
        false // invariant: at least two species
    }

    pub fn mass(&self, i: usize) -> f64 {
        self.species[i].mass
    }

    pub fn name(&self, i: usize) -> &str {
        &self.species[i].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.species.iter().position(|s| s.name == name)
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn boltzmann_k(&self) -> f64 {
        self.boltzmann_k
    }

    /// Thermal energy kT.
    pub fn kt(&self) -> f64 {
        self.boltzmann_k * self.temperature
    }

    pub fn total_concentration(&self) -> f64 {
        self.total_concentration
    }
}

/// Mole fractions n_i = c_i / c_total. Rejects negative concentrations and
/// nonpositive totals.
pub fn mole_fractions(concentrations: &[f64], c_total: f64) -> Result<Vec<f64>> {
    if !(c_total > 0.0) || !c_total.is_finite() {
        return Err(Error::NonpositiveTotalConcentration { value: c_total });
    }
    for (i, &c) in concentrations.iter().enumerate() {
        if !(c >= 0.0) {
            return Err(Error::NegativeConcentration { index: i, value: c });
        }
    }
    Ok(concentrations.iter().map(|&c| c / c_total).collect())
}
