//! Decide eutacticity of the shortest-curve configuration at sample points.
//!
//! A point is eutactic when the origin lies in the relative interior of the
//! convex hull of the length differentials of all systolic (shortest) curves.
//! The check reports the differentials, the verdict, the rank of their span,
//! and — when the verdict is positive — the interior margin and a convex
//! weight vector certifying it.

use stratal::torus::{eutactic_check, Branch, EutacticOptions, FrickePoint};

fn main() {
    let opts = EutacticOptions::default();
    let cases = [
        (
            "square point (3,3,3)",
            FrickePoint::solve(3.0, 3.0, Branch::Minus).unwrap(),
        ),
        (
            "hexagonal-like (3,3,6)",
            FrickePoint::new(3.0, 3.0, 6.0).unwrap(),
        ),
        (
            "two shortest curves",
            FrickePoint::solve(2.9, 2.9, Branch::Minus).unwrap(),
        ),
        (
            "generic point",
            FrickePoint::solve(3.37, 4.21, Branch::Minus).unwrap(),
        ),
    ];

    for (name, p) in &cases {
        let report = eutactic_check(p, &opts).expect("systole computable");
        println!(
            "{name}: point ({:.4}, {:.4}, {:.4})",
            report.point[0], report.point[1], report.point[2]
        );
        println!(
            "  systole {:.6} attained by {} curve(s)",
            report.systole,
            report.shortest.len()
        );
        for (record, d) in report.shortest.iter().zip(&report.differentials) {
            println!(
                "    slope {:>4}  differential ({:+.6}, {:+.6})",
                record.slope.to_string(),
                d[0],
                d[1]
            );
        }
        match (report.is_eutactic, report.lp_margin, &report.lp_weights) {
            (true, Some(margin), Some(w)) => {
                println!(
                    "  eutactic (rank {}), margin {:.4}, weights {:?}",
                    report.eutactic_rank, margin, w
                )
            }
            _ => println!("  not eutactic (rank {})", report.eutactic_rank),
        }
        println!();
    }
}
