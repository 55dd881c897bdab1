//! Named end-to-end setups: a domain, a boundary generator, an exponent
//! pack, and pipeline parameters, with a builder that runs decomposition,
//! annotation, partition, and the quotient in one go.

use crate::error::Result;
use crate::geometry::{
    blocks_and_quotient, build_domain_tree, partition, whitney_decompose, DomainSpec, DomainTree,
    GammaSet, GammaSpec, Partition, Quotient, WhitneyDecomposition, DEFAULT_C_CAL,
};
use crate::weights::ExponentConfig;

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: &'static str,
    pub domain: &'static str,
    pub level: u32,
    pub gamma: GammaSpec,
    pub cfg: ExponentConfig,
    /// Band width; `None` uses the measured follower gap.
    pub m: Option<u32>,
    pub j0_range: (u32, u32),
}

/// Everything the pipeline produces up to the quotient tree.
pub struct Pipeline {
    pub dom: DomainSpec,
    pub gamma: GammaSet,
    pub dec: WhitneyDecomposition,
    pub dt: DomainTree,
    pub part: Partition,
    pub quo: Quotient,
}

/// Builds the geometric pipeline for a domain/generator pair; `m = None`
/// picks the smallest power of two that is a multiple of the measured
/// follower gap.
pub fn build_pipeline(
    dom: DomainSpec,
    gamma_spec: &GammaSpec,
    c_cal: f64,
    m: Option<u32>,
) -> Result<Pipeline> {
    let gamma = GammaSet::build(gamma_spec, dom.d(), dom.level())?;
    gamma.validate_on_boundary(&dom)?;
    let dec = whitney_decompose(&dom)?;
    let dt = build_domain_tree(&dec, gamma.clone(), c_cal)?;
    let part = partition(&dt)?;
    let m = m.unwrap_or_else(|| default_band_width(part.s_bar));
    let quo = blocks_and_quotient(&dt, &part, m)?;
    Ok(Pipeline { dom, gamma, dec, dt, part, quo })
}

/// Smallest power-of-two multiple of the follower gap.
pub fn default_band_width(s_bar: u32) -> u32 {
    let mut m = s_bar.next_power_of_two();
    while m % s_bar != 0 {
        m += s_bar.next_power_of_two();
    }
    m
}

impl Scenario {
    pub fn build(&self) -> Result<Pipeline> {
        let dom = DomainSpec::builtin(self.domain, self.level)?;
        build_pipeline(dom, &self.gamma, DEFAULT_C_CAL, self.m)
    }

    pub fn by_name(name: &str) -> Option<Scenario> {
        all_scenarios().into_iter().find(|s| s.name == name)
    }
}

fn theta_cantor() -> f64 {
    2f64.ln() / 3f64.ln()
}

/// The built-in scenario registry.
pub fn all_scenarios() -> Vec<Scenario> {
    vec![
        Scenario {
            name: "interval-point",
            domain: "interval",
            level: 10,
            gamma: GammaSpec::corner(1),
            cfg: ExponentConfig::plain(1, 1, 2.0, 2.0, 0.0, 0.0, 0.0),
            m: None,
            j0_range: (1, 5),
        },
        Scenario {
            name: "square-point",
            domain: "square",
            level: 8,
            gamma: GammaSpec::corner(2),
            cfg: ExponentConfig::plain(2, 2, 2.0, 2.0, 0.0, 0.0, 0.0),
            m: None,
            j0_range: (1, 4),
        },
        Scenario {
            name: "square-face",
            domain: "square",
            level: 8,
            gamma: GammaSpec::bottom_face(),
            cfg: ExponentConfig::plain(2, 2, 2.0, 2.0, 0.0, 0.0, 1.0),
            m: None,
            j0_range: (1, 4),
        },
        Scenario {
            name: "square-cantor",
            domain: "square",
            level: 8,
            gamma: GammaSpec::Cantor { k: 3, depth: 0, axis: 1, side: 0 },
            cfg: ExponentConfig::plain(2, 2, 2.0, 2.0, 0.0, 0.0, theta_cantor()),
            m: None,
            j0_range: (1, 4),
        },
        // Scaling scenarios: point generator on the interval, slopes -1/-2.
        Scenario {
            name: "scaling-slope1",
            domain: "interval",
            level: 12,
            gamma: GammaSpec::corner(1),
            cfg: ExponentConfig::plain(1, 1, 2.0, 2.0, 0.0, 0.0, 0.0),
            m: Some(1),
            j0_range: (1, 5),
        },
        Scenario {
            name: "scaling-slope2",
            domain: "interval",
            level: 12,
            gamma: GammaSpec::corner(1),
            cfg: ExponentConfig::plain(1, 2, 2.0, 2.0, 0.0, 0.0, 0.0),
            m: Some(1),
            j0_range: (1, 5),
        },
        // Grid-check scenarios: r = 1 on the square.
        Scenario {
            name: "grid-point",
            domain: "square",
            level: 6,
            gamma: GammaSpec::corner(2),
            cfg: ExponentConfig::plain(2, 1, 2.0, 2.0, 0.0, 0.0, 0.0),
            m: None,
            j0_range: (1, 3),
        },
        Scenario {
            name: "grid-face",
            domain: "square",
            level: 6,
            gamma: GammaSpec::bottom_face(),
            cfg: ExponentConfig::plain(2, 1, 2.0, 2.0, 0.0, 0.2, 1.0),
            m: None,
            j0_range: (1, 3),
        },
        Scenario {
            name: "grid-cantor",
            domain: "square",
            level: 6,
            gamma: GammaSpec::Cantor { k: 3, depth: 0, axis: 1, side: 0 },
            cfg: ExponentConfig::plain(2, 1, 2.0, 2.0, 0.3, 0.0, theta_cantor()),
            m: None,
            j0_range: (1, 3),
        },
        // Witness scenarios; the `-ok` packs are the admissible twins.
        Scenario {
            name: "sharp-a",
            domain: "interval",
            level: 12,
            gamma: GammaSpec::corner(1),
            cfg: ExponentConfig::plain(1, 1, 2.0, 2.0, 1.5, 0.0, 0.0),
            m: None,
            j0_range: (4, 9),
        },
        Scenario {
            name: "sharp-a-ok",
            domain: "interval",
            level: 12,
            gamma: GammaSpec::corner(1),
            cfg: ExponentConfig::plain(1, 1, 2.0, 2.0, 0.5, 0.0, 0.0),
            m: None,
            j0_range: (4, 9),
        },
        Scenario {
            name: "sharp-b",
            domain: "interval",
            level: 12,
            gamma: GammaSpec::corner(1),
            cfg: borderline_cfg(-0.5),
            m: None,
            j0_range: (4, 9),
        },
        Scenario {
            name: "sharp-b-ok",
            domain: "interval",
            level: 12,
            gamma: GammaSpec::corner(1),
            cfg: borderline_cfg(0.5),
            m: None,
            j0_range: (4, 9),
        },
        Scenario {
            name: "sharp-pq",
            domain: "square",
            level: 8,
            gamma: GammaSpec::bottom_face(),
            cfg: ExponentConfig::plain(2, 1, 4.0, 2.0, 1.75, 0.0, 1.0),
            m: None,
            j0_range: (3, 6),
        },
        Scenario {
            name: "sharp-pq-ok",
            domain: "square",
            level: 8,
            gamma: GammaSpec::bottom_face(),
            cfg: ExponentConfig::plain(2, 1, 4.0, 2.0, 1.0, 0.0, 1.0),
            m: None,
            j0_range: (3, 6),
        },
    ]
}

/// Borderline pack `beta = delta` on the interval with `gamma = -1/2`; the
/// sign of `alpha_g` flips it between admissible and witnessed.
fn borderline_cfg(alpha_g: f64) -> ExponentConfig {
    let mut cfg = ExponentConfig::plain(1, 1, 2.0, 2.0, 1.0, 0.0, 0.0);
    cfg.h.log_exponent = -0.5;
    cfg.psi_g.log_exponent = -alpha_g;
    cfg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weights::Classification;

    #[test]
    fn registry_names_unique_and_buildable_configs() {
        let all = all_scenarios();
        let mut names: Vec<&str> = all.iter().map(|s| s.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), all.len());
        // Non-witness scenarios carry admissible packs.
        for s in &all {
            if !s.name.starts_with("sharp") || s.name.ends_with("-ok") {
                assert!(
                    !matches!(s.cfg.validate(), Classification::Invalid(_)),
                    "{} must be admissible: {:?}",
                    s.name,
                    s.cfg.validate()
                );
            }
        }
    }

    #[test]
    fn pipeline_builds_for_small_scenarios() {
        for name in ["grid-point", "grid-face"] {
            let s = Scenario::by_name(name).unwrap();
            let pipe = s.build().unwrap();
            assert!(pipe.quo.tree.len() >= 2, "{name}");
        }
    }
}
