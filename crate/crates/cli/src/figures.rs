//! Reference figure data. Each figure is a fixed set of states, compared
//! pairwise.

use photostat::{compare, number_difference_distribution, number_sum_distribution, order_profile};

use crate::commands::{figure_tables, label_of, parse_spec, Settings};
use crate::error::{CliError, CliResult};
use crate::report::Report;

pub const FIGURE_IDS: [u32; 9] = [2, 3, 4, 5, 7, 8, 9, 10, 11];

const MIXED: &str = "mix(0.9;number(1);thermal(11))";
const SQUEEZED_2N: &str = "squeezed_target(mean=6,var=12)";

/// What a figure plots.
enum Plot {
    /// Ordered partial sums of several states; `pairs` index into `states`.
    States {
        states: &'static [&'static str],
        pairs: &'static [(usize, usize)],
    },
    /// Number-sum against number-difference distribution of one state.
    Splitter { state: &'static str },
}

struct Figure {
    id: u32,
    caption: &'static str,
    plot: Plot,
}

const FIGURES: [Figure; 9] = [
    Figure {
        id: 2,
        caption: "coherent states, mean 1, 5, 10",
        plot: Plot::States {
            states: &["coherent(1)", "coherent(5)", "coherent(10)"],
            pairs: &[(0, 1), (1, 2), (0, 2)],
        },
    },
    Figure {
        id: 3,
        caption: "thermal vs coherent, both mean 1.5",
        plot: Plot::States {
            states: &["coherent(1.5)", "thermal(1.5)"],
            pairs: &[(1, 0)],
        },
    },
    Figure {
        id: 4,
        caption: "coherent mean 100 vs thermal mean 10",
        plot: Plot::States {
            states: &["coherent(100)", "thermal(10)"],
            pairs: &[(0, 1)],
        },
    },
    Figure {
        id: 5,
        caption: "mean 6: squeezed var 14n (84), squeezed var 0.6n (3.6), coherent",
        plot: Plot::States {
            states: &["squeezed_target(mean=6,var=84)", "squeezed_target(mean=6,var=3.6)", "coherent(6)"],
            pairs: &[(1, 0), (2, 0), (1, 2)],
        },
    },
    Figure {
        id: 7,
        caption: "p+ vs p- for coherent, mean 1",
        plot: Plot::Splitter { state: "coherent(1)" },
    },
    Figure {
        id: 8,
        caption: "squeezed var 2n vs coherent, mean 6",
        plot: Plot::States {
            states: &[SQUEEZED_2N, "coherent(6)"],
            pairs: &[(0, 1)],
        },
    },
    Figure {
        id: 9,
        caption: "p+ vs p- for squeezed var 2n, mean 6",
        plot: Plot::Splitter { state: SQUEEZED_2N },
    },
    Figure {
        id: 10,
        caption: "photon plus thermal mixture (xi 0.9, mean 2) vs coherent mean 2",
        plot: Plot::States {
            states: &[MIXED, "coherent(2)"],
            pairs: &[(0, 1)],
        },
    },
    Figure {
        id: 11,
        caption: "p+ vs p- for the photon plus thermal mixture",
        plot: Plot::Splitter { state: MIXED },
    },
];

/// One line per figure, for `--help`.
pub fn figure_help() -> String {
    FIGURES
        .iter()
        .map(|f| {
            let states = match &f.plot {
                Plot::States { states, .. } => states.join(", "),
                Plot::Splitter { state } => format!("p+/p- of {state}"),
            };
            format!("  {:>2}: {} [{}]", f.id, f.caption, states)
        })
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn run_figure(id: u32, settings: Settings) -> CliResult<Report> {
    let figure = FIGURES.iter().find(|f| f.id == id).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown figure id {id}; valid ids are {}",
            FIGURE_IDS.map(|i| i.to_string()).join(", ")
        ))
    })?;
    let mut report = Report::new("figure");
    report.param("figure", id as u64).param("caption", figure.caption);
    report.param("eps", settings.eps).param("tol", settings.tol);

    match &figure.plot {
        Plot::States { states, pairs } => {
            let mut dists = Vec::new();
            for (i, text) in states.iter().enumerate() {
                let spec = parse_spec(text)?;
                let d = spec.build(settings.eps)?;
                let m = d.moments();
                report
                    .param(format!("state{i}"), spec.to_string())
                    .param(format!("state{i}_mean"), m.mean)
                    .param(format!("state{i}_variance"), m.variance);
                dists.push(d);
            }
            let profiles: Vec<_> = dists.iter().map(order_profile).collect();
            let labels: Vec<String> = dists.iter().map(label_of).collect();
            let verdicts = pairs
                .iter()
                .map(|&(i, j)| compare(&profiles[i], &profiles[j], settings.tol))
                .collect::<Result<Vec<_>, _>>()?;
            let comparisons: Vec<_> = pairs
                .iter()
                .zip(&verdicts)
                .map(|(&(i, j), v)| (labels[i].as_str(), labels[j].as_str(), v))
                .collect();
            figure_tables(&mut report, &profiles.iter().collect::<Vec<_>>(), &comparisons);
        }
        Plot::Splitter { state } => {
            let spec = parse_spec(state)?;
            let d = spec.build(settings.eps)?;
            let m = d.moments();
            report
                .param("state", spec.to_string())
                .param("state_mean", m.mean)
                .param("state_variance", m.variance)
                .param("covariance", photostat::detector_covariance(&d));
            let plus = order_profile(&number_sum_distribution(&d));
            let minus = order_profile(&number_difference_distribution(&d));
            let verdict = compare(&plus, &minus, settings.tol)?;
            let (lp, lm) = (plus.label().to_string(), minus.label().to_string());
            figure_tables(&mut report, &[&plus, &minus], &[(&lp, &lm, &verdict)]);
        }
    }
    Ok(report)
}
