//! Named-experiment registry: every runnable experiment with its typed
//! parameter schema and defaults.

use crate::config::ParamValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    Bool,
    Int,
    Float,
    Str,
    FloatList,
}

impl ParamKind {
    pub fn name(&self) -> &'static str {
        match self {
            ParamKind::Bool => "bool",
            ParamKind::Int => "int",
            ParamKind::Float => "float",
            ParamKind::Str => "string",
            ParamKind::FloatList => "float list",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ParamSpec {
    pub key: &'static str,
    pub kind: ParamKind,
    pub default: ParamValue,
    pub doc: &'static str,
    /// Allowed values for string parameters.
    pub choices: Option<&'static [&'static str]>,
}

impl ParamSpec {
    fn new(key: &'static str, kind: ParamKind, default: ParamValue, doc: &'static str) -> Self {
        Self {
            key,
            kind,
            default,
            doc,
            choices: None,
        }
    }

    fn choice(
        key: &'static str,
        default: &'static str,
        choices: &'static [&'static str],
        doc: &'static str,
    ) -> Self {
        Self {
            key,
            kind: ParamKind::Str,
            default: ParamValue::Str(default.to_string()),
            doc,
            choices: Some(choices),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub name: &'static str,
    pub doc: &'static str,
    pub uses_trials: bool,
    pub uses_seed: bool,
    pub default_trials: u64,
    pub params: Vec<ParamSpec>,
}

/// All seven experiments.
pub fn registry() -> Vec<ExperimentSpec> {
    use ParamKind as K;
    use ParamValue as V;
    vec![
        ExperimentSpec {
            name: "contraction",
            doc: "Commutator residual of the boosted momentum representation across a ladder of light speeds",
            uses_trials: false,
            uses_seed: false,
            default_trials: 0,
            params: vec![
                ParamSpec::new(
                    "c_values",
                    K::FloatList,
                    V::FloatList(vec![10.0, 30.0, 100.0, 300.0, 1000.0]),
                    "light speeds to scan",
                ),
                ParamSpec::new("grid_points", K::Int, V::Int(4096), "momentum grid size"),
                ParamSpec::new("half_width", K::Float, V::Float(8.0), "momentum grid half-width"),
                ParamSpec::new("packet_width", K::Float, V::Float(1.0), "gaussian packet width"),
                ParamSpec::new("mass", K::Float, V::Float(1.0), "particle mass"),
                ParamSpec::new("hbar", K::Float, V::Float(1.0), "action quantum"),
            ],
        },
        ExperimentSpec {
            name: "density",
            doc: "Orthogonality deviation and density reconstruction error per dihedral group",
            uses_trials: false,
            uses_seed: true,
            default_trials: 0,
            params: vec![
                ParamSpec::new("n_min", K::Int, V::Int(3), "smallest rotation count"),
                ParamSpec::new("n_max", K::Int, V::Int(8), "largest rotation count"),
                ParamSpec::new("states", K::Int, V::Int(100), "random source states per group"),
                ParamSpec::new("k_w", K::Float, V::Float(1.0), "irrep wavenumber"),
            ],
        },
        ExperimentSpec {
            name: "gaussian",
            doc: "Closed-form transition amplitude against the damped quadrature oracle",
            uses_trials: false,
            uses_seed: false,
            default_trials: 0,
            params: vec![ParamSpec::new(
                "eps",
                K::Float,
                V::Float(0.05),
                "damping regulator shared by both routes",
            )],
        },
        ExperimentSpec {
            name: "twin-slit",
            doc: "Discrete-action fringe intensity against the free-particle form over a phase scan",
            uses_trials: false,
            uses_seed: false,
            default_trials: 0,
            params: vec![
                ParamSpec::new("points", K::Int, V::Int(100), "phase scan resolution"),
                ParamSpec::new("mass", K::Float, V::Float(1.0), "oscillator mass"),
                ParamSpec::new("kappa", K::Float, V::Float(2.0), "self spring constant"),
                ParamSpec::new("k23", K::Float, V::Float(3.0), "slit-2 to detector coupling"),
                ParamSpec::new("k43", K::Float, V::Float(4.0), "slit-4 to detector coupling"),
                ParamSpec::new(
                    "omega0",
                    K::Float,
                    V::Float(1.732_050_807_568_877_2),
                    "monochromatic source frequency",
                ),
                ParamSpec::new("momentum", K::Float, V::Float(1.0), "comparison momentum"),
                ParamSpec::new("hbar", K::Float, V::Float(1.0), "action quantum"),
            ],
        },
        ExperimentSpec {
            name: "mzi",
            doc: "Click distribution of one interferometer layout",
            uses_trials: false,
            uses_seed: false,
            default_trials: 0,
            params: vec![
                ParamSpec::choice(
                    "blocker",
                    "none",
                    &["none", "lower", "upper", "both"],
                    "which arm carries an absorber",
                ),
                ParamSpec::new("bs1", K::Bool, V::Bool(true), "first beam splitter present"),
                ParamSpec::new("bs2", K::Bool, V::Bool(true), "second beam splitter present"),
                ParamSpec::new("k_w", K::Float, V::Float(1.0), "irrep wavenumber"),
            ],
        },
        ExperimentSpec {
            name: "ifm",
            doc: "Interaction-free measurement trials with the conditional X follow-up",
            uses_trials: true,
            uses_seed: true,
            default_trials: 100_000,
            params: vec![ParamSpec::choice(
                "branch",
                "random",
                &["random", "plus", "minus"],
                "atom box branch per trial",
            )],
        },
        ExperimentSpec {
            name: "qle",
            doc: "Two-atom liar arrangement: post-selection, agreement matrix, instruction-set bound",
            uses_trials: true,
            uses_seed: true,
            default_trials: 100_000,
            params: vec![ParamSpec::choice(
                "setting_policy",
                "random",
                &["random", "all-z"],
                "phase-3 setting choice: \"random\" draws Z/Gamma/Delta uniformly per atom, \"all-z\" measures Z on both",
            )],
        },
    ]
}

/// Human-readable registry listing.
pub fn listing() -> String {
    let mut out = String::new();
    for spec in registry() {
        out.push_str(&format!("{}\n  {}\n", spec.name, spec.doc));
        out.push_str(&format!(
            "  trials: {}  seed: {}\n",
            if spec.uses_trials {
                format!("required (default {})", spec.default_trials)
            } else {
                "unused".to_string()
            },
            if spec.uses_seed { "used" } else { "unused" },
        ));
        for p in &spec.params {
            let choices = p
                .choices
                .map(|c| format!(" (one of {c:?})"))
                .unwrap_or_default();
            out.push_str(&format!(
                "  --param {} <{}>{}: {} [default: {}]\n",
                p.key,
                p.kind.name(),
                choices,
                p.doc,
                default_display(&p.default),
            ));
        }
        out.push('\n');
    }
    out
}

fn default_display(value: &ParamValue) -> String {
    match value {
        ParamValue::Bool(b) => b.to_string(),
        ParamValue::Int(i) => i.to_string(),
        ParamValue::Float(x) => format!("{x}"),
        ParamValue::Str(s) => s.clone(),
        ParamValue::FloatList(xs) => format!("{xs:?}"),
    }
}
