//! Named parameter sets `fig1` to `fig6`. Energies and times in units of the
//! cutoff Γ_c = 1; each series is a list of settings applied over the defaults.

use super::config::Objective;

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub settings: Vec<(&'static str, String)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub command: Objective,
    pub series: Vec<Series>,
}

fn series(label: impl Into<String>, settings: &[(&'static str, &str)]) -> Series {
    Series { label: label.into(), settings: settings.iter().map(|(k, v)| (*k, v.to_string())).collect() }
}

const FIG1_BASE: [(&str, &str); 6] =
    [("temperature", "10"), ("gamma", "1"), ("cutoff", "1"), ("eps", "0.01"), ("p1", "rot:90:y"), ("p2", "rot:90:x")];

const FIG3_BASE: [(&str, &str); 5] =
    [("gamma", "0.1"), ("cutoff", "1"), ("sz0", "-0.01"), ("p1", "rot:-90:x"), ("p2", "rot:-90:y")];

fn with(base: &[(&'static str, &'static str)], extra: &[(&'static str, &'static str)]) -> Vec<(&'static str, &'static str)> {
    base.iter().chain(extra).copied().collect()
}

pub const NAMES: [&str; 6] = ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6"];

pub fn lookup(name: &str) -> Option<Preset> {
    let preset = match name {
        "fig1" => Preset {
            name: "fig1",
            description: "two-pulse work vs tau, T=10, gamma=1, eps=0.01; curves for sz0 = -0.8, -0.5, -0.4, -0.3",
            command: Objective::Work2,
            series: ["-0.8", "-0.5", "-0.4", "-0.3"]
                .iter()
                .map(|s| series(format!("sz0={s}"), &with(&FIG1_BASE, &[("sz0", s)])))
                .collect(),
        },
        "fig2" => Preset {
            name: "fig2",
            description: "two-pulse work vs tau, T=10, eps=0.01, sz0=-0.8; curves for gamma = 4, 2, 0.5, 0.1",
            command: Objective::Work2,
            series: ["4", "2", "0.5", "0.1"]
                .iter()
                .map(|g| series(format!("gamma={g}"), &with(&FIG1_BASE, &[("sz0", "-0.8"), ("gamma", g)])))
                .collect(),
        },
        "fig3" => Preset {
            name: "fig3",
            description: "two-pulse work vs tau, gamma=0.1, sz0=-0.01; (T, eps) = (0.1, 3), (0.1, 2), (1, 3)",
            command: Objective::Work2,
            series: [("0.1", "3"), ("0.1", "2"), ("1", "3")]
                .iter()
                .map(|(t, e)| {
                    series(format!("T={t};eps={e}"), &with(&FIG3_BASE, &[("temperature", t), ("eps", e)]))
                })
                .collect(),
        },
        "fig4" => Preset {
            name: "fig4",
            description: "efficiency vs tau for the fig1 setting with sz0=-0.8",
            command: Objective::Work2,
            series: vec![series("sz0=-0.8", &with(&FIG1_BASE, &[("sz0", "-0.8")]))],
        },
        "fig5" => Preset {
            name: "fig5",
            description: "efficiency vs tau for the fig3 setting with T=0.1, eps=3",
            command: Objective::Work2,
            series: vec![series("T=0.1;eps=3", &with(&FIG3_BASE, &[("temperature", "0.1"), ("eps", "3")]))],
        },
        "fig6" => Preset {
            name: "fig6",
            description: "spin-echo work vs tau, T_S=1000, d=100, gamma=0.1, omega0=8; curves for T = 10, 5, 1, 0.5",
            command: Objective::Echo3,
            series: ["10", "5", "1", "0.5"]
                .iter()
                .map(|t| {
                    series(
                        format!("T={t}"),
                        &[
                            ("temperature", t),
                            ("ts", "1000"),
                            ("disorder_var", "100"),
                            ("gamma", "0.1"),
                            ("cutoff", "1"),
                            ("omega0", "8"),
                            ("p1", "rot:90:x"),
                            ("p2", "rot:-90:y"),
                        ],
                    )
                })
                .collect(),
        },
        _ => return None,
    };
    Some(preset)
}
