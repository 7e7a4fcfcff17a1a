use std::fs;
use std::io::Write;
use std::path::PathBuf;

use sylave::gen::{generate, EntryDist, GenSpec};

use crate::file::instance_path;
use crate::{CliError, InstanceFile};

#[derive(Debug, Clone)]
pub struct GenOptions {
    pub dims: [usize; 4],
    pub seed: u64,
    pub margin: Option<f64>,
    pub count: usize,
    pub dir: PathBuf,
    pub dist: EntryDist,
}

/// Writes `count` files; instance `i` uses seed `seed + i` and is recorded
/// with that seed in its `genspec` block.
pub fn gen(opts: &GenOptions, out: &mut dyn Write) -> Result<u8, CliError> {
    let [m, n, p, q] = opts.dims;
    let mut spec = GenSpec::new(m, n, p, q, opts.seed).with_dist(opts.dist);
    spec.margin = opts.margin;
    spec.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    fs::create_dir_all(&opts.dir).map_err(|source| CliError::Io { path: opts.dir.clone(), source })?;
    for i in 0..opts.count {
        let this = spec.with_seed(opts.seed.wrapping_add(i as u64));
        let inst = generate(&this).map_err(|e| CliError::Usage(e.to_string()))?;
        let path = instance_path(&opts.dir, opts.seed, i);
        InstanceFile::new(inst, Some(this)).write(&path)?;
        writeln!(out, "{}", path.display())?;
    }
    Ok(0)
}
