//! Projects every builtin's singular loci onto both spaces and prints the
//! shape of each surface, with the reference shape where one is known.
//!
//! `cargo run --release -p deltakin-core --example elimination_table`

use std::time::Instant;

use deltakin::robots::{builtin_model, BUILTIN_NAMES};
use deltakin::singularity::{compare_stats, project, reference_stats, singularity_det, SingularityKind, Space};

fn main() {
    println!("robot        kind     space       deg per-var         terms  bits  reference             time");
    for name in BUILTIN_NAMES {
        let m = builtin_model(name).unwrap();
        for kind in [SingularityKind::Parallel, SingularityKind::Serial] {
            let g = singularity_det(&m, kind);
            for space in [Space::Workspace, Space::Jointspace] {
                let t = Instant::now();
                let s = project(&m, &g, space).unwrap();
                let elapsed = t.elapsed();
                let reference = match reference_stats(name, kind).filter(|r| r.space == space) {
                    Some(r) => format!(
                        "{} {:?} {} {} {}",
                        r.total_degree,
                        r.per_var_degrees,
                        r.num_terms,
                        r.coeff_bitsize,
                        if compare_stats(&s.stats, &r).all { "=" } else { "≠" }
                    ),
                    None => "-".into(),
                };
                println!(
                    "{name:12} {:8} {:10} {:4} {:16} {:6} {:5}  {reference:20} {elapsed:.2?}",
                    kind.name(),
                    space.name(),
                    s.stats.total_degree,
                    format!("{:?}", s.stats.per_var_degrees),
                    s.stats.num_terms,
                    s.stats.coeff_bitsize,
                );
                for f in &s.extraneous_factors_removed {
                    println!("{:36}removed ({})^{}", "", f.factor, f.multiplicity);
                }
            }
        }
    }
}
