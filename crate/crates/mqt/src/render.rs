//! Plain-text grids for possibility and probability tables.
//!
//! Marks render as `X`, blanks as spaces, probabilities as exact fraction
//! strings, with one bordered cell group per measurement pair.

use crate::lp::format_ratio;
use crate::resolve::ProbabilityTable;
use crate::tables::{PossibilityTable, Scenario};

/// Render any table whose cell contents are produced by `cell(i, j, a, b)`.
fn render_grid<F>(scenario: &Scenario, cell: F) -> String
where
    F: Fn(usize, usize, usize, usize) -> String,
{
    let nr = scenario.rows.len();
    let nc = scenario.cols.len();
    // Width of each sub-column: widest cell in it, at least 1.
    let mut widths: Vec<Vec<usize>> = scenario
        .cols
        .iter()
        .map(|c| vec![1usize; c.outcomes])
        .collect();
    for i in 0..nr {
        for (j, c) in scenario.cols.iter().enumerate() {
            for a in 0..scenario.rows[i].outcomes {
                for b in 0..c.outcomes {
                    widths[j][b] = widths[j][b].max(cell(i, j, a, b).len());
                }
            }
        }
    }
    let label_width = scenario
        .rows
        .iter()
        .map(|r| r.label.len())
        .max()
        .unwrap_or(1)
        .max(1)
        + 2; // room for the outcome index
    let block_width = |j: usize| -> usize {
        widths[j].iter().sum::<usize>() + widths[j].len() - 1
    };

    let mut out = String::new();
    // Header: column measurement labels centered over their blocks.
    out.push_str(&" ".repeat(label_width));
    for j in 0..nc {
        out.push_str(" | ");
        let w = block_width(j);
        let l = &scenario.cols[j].label;
        let pad = w.saturating_sub(l.len());
        out.push_str(&" ".repeat(pad / 2));
        out.push_str(l);
        out.push_str(&" ".repeat(pad - pad / 2));
    }
    out.push('\n');
    let mut rule = String::new();
    rule.push_str(&"-".repeat(label_width));
    for j in 0..nc {
        rule.push_str("-+-");
        rule.push_str(&"-".repeat(block_width(j)));
    }
    for i in 0..nr {
        out.push_str(&rule);
        out.push('\n');
        for a in 0..scenario.rows[i].outcomes {
            let label = if a == 0 {
                format!("{} {}", scenario.rows[i].label, a)
            } else {
                format!("{} {}", " ".repeat(scenario.rows[i].label.len()), a)
            };
            out.push_str(&format!("{label:<label_width$}"));
            for j in 0..nc {
                out.push_str(" | ");
                for b in 0..scenario.cols[j].outcomes {
                    if b > 0 {
                        out.push(' ');
                    }
                    let w = widths[j][b];
                    out.push_str(&format!("{:>w$}", cell(i, j, a, b)));
                }
            }
            out.push('\n');
        }
    }
    out
}

/// Render a possibility table: `X` for a mark, space for a blank.
pub fn render_possibility(t: &PossibilityTable) -> String {
    render_grid(t.scenario(), |i, j, a, b| {
        if t.mark(i, j, a, b) {
            "X".to_string()
        } else {
            " ".to_string()
        }
    })
}

/// Render a probability table with exact fractions; zeros render as dots to
/// keep the marks readable.
pub fn render_probability(t: &ProbabilityTable) -> String {
    use num_traits::Zero;
    render_grid(t.scenario(), |i, j, a, b| {
        let p = t.prob(i, j, a, b);
        if p.is_zero() {
            ".".to_string()
        } else {
            format_ratio(p)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::resolve::singlet_resolution;
    use crate::tables::{prbox_table, singlet_table};

    #[test]
    fn possibility_grid_shape() {
        let text = render_possibility(&singlet_table());
        // 3 block rows x 2 outcome lines + header + 3 rules.
        assert_eq!(text.lines().count(), 10);
        // Same-measurement blocks are antidiagonal: the first X row.
        assert!(text.contains("X"));
        let marks: usize = text.matches('X').count();
        // 24 marks (6 on same-measurement antidiagonals, 18 in mixed blocks)
        // plus the X column label and the X row label.
        assert_eq!(marks, 24 + 2);
    }

    #[test]
    fn probability_grid_uses_fractions() {
        let text = render_probability(&singlet_resolution());
        assert!(text.contains("1/2"));
        assert!(!text.contains("0.5"));
    }

    #[test]
    fn prbox_grid() {
        let text = render_possibility(&prbox_table());
        assert!(text.starts_with("   "));
        assert_eq!(text.matches('X').count(), 8);
    }
}
