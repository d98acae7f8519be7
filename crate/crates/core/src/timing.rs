//! Deterministic runtime models for annealer, gate-model and CPU
//! comparisons. Pure arithmetic, no clock access: wall-clock measurement
//! lives in the CLI runner and is injected into reports.

use crate::error::{Error, Result};

/// Annealer access-time parameters: one-time programming overhead plus
/// per-read anneal, readout and inter-read delay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnealerTiming {
    pub programming_ms: f64,
    pub anneal_us: f64,
    pub readout_us: f64,
    pub delay_us: f64,
    pub reads: u64,
}

impl AnnealerTiming {
    pub fn new(
        programming_ms: f64,
        anneal_us: f64,
        readout_us: f64,
        delay_us: f64,
        reads: u64,
    ) -> Result<Self> {
        for (name, v) in [
            ("programming_ms", programming_ms),
            ("anneal_us", anneal_us),
            ("readout_us", readout_us),
            ("delay_us", delay_us),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::Parameter(format!("{name} must be >= 0, got {v}")));
            }
        }
        if reads == 0 {
            return Err(Error::Parameter("reads must be >= 1".to_string()));
        }
        Ok(Self {
            programming_ms,
            anneal_us,
            readout_us,
            delay_us,
            reads,
        })
    }
}

/// Gate-model runtime estimation flavors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateModelFlavor {
    /// Documented workload formula: iterations * (2 + 0.00035 * reads).
    WorkloadFormula,
    /// Per-gate execution time times shots, iterations and circuit depth.
    PerGate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateModelTiming {
    pub flavor: GateModelFlavor,
    pub per_gate_us: f64,
    pub shots: u64,
    pub iterations: u64,
    pub depth: u64,
}

impl GateModelTiming {
    pub fn per_gate(per_gate_us: f64, shots: u64, iterations: u64, depth: u64) -> Result<Self> {
        if !per_gate_us.is_finite()
            || per_gate_us <= 0.0
            || shots == 0
            || iterations == 0
            || depth == 0
        {
            return Err(Error::Parameter(
                "per-gate timing needs positive per_gate_us, shots, iterations and depth"
                    .to_string(),
            ));
        }
        Ok(Self {
            flavor: GateModelFlavor::PerGate,
            per_gate_us,
            shots,
            iterations,
            depth,
        })
    }

    pub fn workload(reads: u64, iterations: u64) -> Result<Self> {
        if reads == 0 || iterations == 0 {
            return Err(Error::Parameter(
                "workload timing needs reads and iterations >= 1".to_string(),
            ));
        }
        Ok(Self {
            flavor: GateModelFlavor::WorkloadFormula,
            per_gate_us: 0.0,
            shots: reads,
            iterations,
            depth: 1,
        })
    }
}

/// Total annealer access time in seconds:
/// programming + reads * (anneal + readout + delay).
pub fn qpu_access_time(t: &AnnealerTiming) -> f64 {
    t.programming_ms / 1e3 + t.reads as f64 * (t.anneal_us + t.readout_us + t.delay_us) / 1e6
}

/// Gate-model workload estimate in seconds: iterations * (2 + 0.00035 * reads).
pub fn ibm_workload_time(reads: u64, iterations: u64) -> f64 {
    iterations as f64 * (2.0 + 0.00035 * reads as f64)
}

/// Per-gate estimate in seconds: per_gate_us * shots * iterations * depth.
/// Requires the [`GateModelFlavor::PerGate`] flavor.
pub fn per_gate_time(g: &GateModelTiming) -> Result<f64> {
    if g.flavor != GateModelFlavor::PerGate {
        return Err(Error::Parameter(
            "per_gate_time requires the per-gate flavor".to_string(),
        ));
    }
    Ok(g.per_gate_us / 1e6 * g.shots as f64 * g.iterations as f64 * g.depth as f64)
}

/// Estimate for either flavor.
pub fn gate_model_time(g: &GateModelTiming) -> f64 {
    match g.flavor {
        GateModelFlavor::WorkloadFormula => ibm_workload_time(g.shots, g.iterations),
        GateModelFlavor::PerGate => per_gate_time(g).expect("flavor checked"),
    }
}

/// Ratio t_other / t_ref.
pub fn speedup_ratio(t_other: f64, t_ref: f64) -> Result<f64> {
    if !t_ref.is_finite() || t_ref <= 0.0 {
        return Err(Error::Parameter(format!(
            "reference time must be positive, got {t_ref}"
        )));
    }
    Ok(t_other / t_ref)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close2(value: f64, expect: f64) {
        // Two significant digits.
        assert!(
            (value / expect - 1.0).abs() < 0.05,
            "{value} not within 2 significant digits of {expect}"
        );
    }

    #[test]
    fn qpu_access_reference_points() {
        let a = AnnealerTiming::new(35.0, 500.0, 98.0, 60.0, 1000).unwrap();
        assert!((qpu_access_time(&a) - 0.693).abs() < 1e-12);
        let b = AnnealerTiming::new(35.0, 350.0, 98.0, 60.0, 1000).unwrap();
        assert!((qpu_access_time(&b) - 0.543).abs() < 1e-12);
        // Programming only.
        let c = AnnealerTiming::new(35.0, 0.0, 0.0, 0.0, 1).unwrap();
        assert_eq!(qpu_access_time(&c), 0.035);
        assert!(AnnealerTiming::new(35.0, 0.0, 0.0, 0.0, 0).is_err());
    }

    #[test]
    fn qpu_access_is_linear_in_reads() {
        // Finite-difference slope equals (anneal+readout+delay)/1e6.
        let t1 = AnnealerTiming::new(35.0, 500.0, 98.0, 60.0, 1000).unwrap();
        let t2 = AnnealerTiming::new(35.0, 500.0, 98.0, 60.0, 2000).unwrap();
        let slope = (qpu_access_time(&t2) - qpu_access_time(&t1)) / 1000.0;
        assert!((slope - (500.0 + 98.0 + 60.0) / 1e6).abs() < 1e-15);
    }

    #[test]
    fn workload_formula_reference_points() {
        assert!((ibm_workload_time(1000, 1) - 2.35).abs() < 1e-12);
        assert!((ibm_workload_time(1000, 10) - 23.5).abs() < 1e-12);
        assert!((ibm_workload_time(10000, 10) - 55.0).abs() < 1e-12);
    }

    #[test]
    fn per_gate_reference_points() {
        let g = GateModelTiming::per_gate(970.0, 1000, 10, 1).unwrap();
        assert!((per_gate_time(&g).unwrap() - 9.7).abs() < 1e-12);
        let g10 = GateModelTiming::per_gate(970.0, 1000, 10, 10).unwrap();
        assert!((per_gate_time(&g10).unwrap() - 97.0).abs() < 1e-12);
        let unit = GateModelTiming::per_gate(970.0, 1, 1, 1).unwrap();
        assert!((per_gate_time(&unit).unwrap() - 0.00097).abs() < 1e-18);
        assert!(GateModelTiming::per_gate(970.0, 1000, 10, 0).is_err());
        // Wrong flavor is a usage error.
        let w = GateModelTiming::workload(1000, 10).unwrap();
        assert!(per_gate_time(&w).is_err());
        assert!((gate_model_time(&w) - 23.5).abs() < 1e-12);
    }

    #[test]
    fn speedup_reference_points() {
        close2(speedup_ratio(9.7, 0.693).unwrap(), 14.0);
        close2(speedup_ratio(23.5, 0.543).unwrap(), 43.0);
        close2(speedup_ratio(55.0, 0.543).unwrap(), 101.0);
        close2(speedup_ratio(97.0, 0.693).unwrap(), 140.0);
        assert!(speedup_ratio(1.0, 0.0).is_err());
    }
}
