//! Seeded search for instances separating the two inverse-based conditions:
//! one where THM_2_2 passes and THM_2_3 fails, and one the other way round.
//! Both are confirmed UNIQUE by the exact oracle and written as fixtures.
//!
//! cargo run -p sylave-cli --example find_nonimplication -- <out-dir>

use std::path::PathBuf;

use sylave::certify::{check_thm_2_2, check_thm_2_3};
use sylave::gen::{generate, GenSpec};
use sylave::model::reformulate;
use sylave::oracle::{decide, OracleConfig};
use sylave::{Uniqueness, Verdict};
use sylave_cli::InstanceFile;

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "crates/cli/tests/fixtures".into()));
    std::fs::create_dir_all(&dir).expect("create output dir");
    let margins = [0.8, 1.0, 1.3, 1.8, 2.5];
    let targets = [
        ((Verdict::Pass, Verdict::Fail), "pass22_fail23.json"),
        ((Verdict::Fail, Verdict::Pass), "pass23_fail22.json"),
    ];
    for ((want22, want23), name) in targets {
        let found = (0u64..200_000).find_map(|seed| {
            let spec = GenSpec::new(2, 2, 2, 2, seed).with_margin(margins[seed as usize % margins.len()]);
            let inst = generate(&spec).ok()?;
            let (c22, c23) = (check_thm_2_2(&inst), check_thm_2_3(&inst));
            // demand a clear margin on both sides so the fixture is robust
            if c22.verdict != want22 || c23.verdict != want23 || c22.margin.abs() < 1e-3 || c23.margin.abs() < 1e-3 {
                return None;
            }
            let verdict = decide(&reformulate(&inst).ok()?, &OracleConfig::default()).ok()?;
            (verdict.verdict == Uniqueness::Unique).then_some((spec, inst, c22.lhs, c23.lhs))
        });
        match found {
            Some((spec, inst, l22, l23)) => {
                let path = dir.join(name);
                InstanceFile::new(inst, Some(spec)).write(&path).expect("write fixture");
                println!("{}: seed {}, margin {:?}, THM_2_2 lhs {l22:.6}, THM_2_3 lhs {l23:.6}", path.display(), spec.seed, spec.margin);
            }
            None => println!("{name}: no instance found in the searched seed range"),
        }
    }
}
