use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::Args;
use proteus_core::io::{self, Manifest};

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub manifest: PathBuf,
}

pub fn verify(args: VerifyArgs) -> anyhow::Result<()> {
    let m = Manifest::verify(&args.manifest)
        .with_context(|| format!("verifying {}", args.manifest.display()))?;
    println!("ok: {} files match {}", m.files.len(), args.manifest.display());
    Ok(())
}

/// `dir/name.csv` -> `dir/name.manifest.json`.
pub fn sidecar_manifest(out: &Path) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("output");
    out.with_file_name(format!("{stem}.manifest.json"))
}

pub fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

pub fn dir_of(path: &Path) -> &Path {
    path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."))
}

/// Writes `manifest` to `path` and checks it against the files on disk.
pub fn seal(manifest: &Manifest, path: &Path) -> anyhow::Result<()> {
    manifest
        .write(path)
        .with_context(|| format!("writing {}", path.display()))?;
    Manifest::verify(path).with_context(|| format!("verifying {}", path.display()))?;
    Ok(())
}

pub fn write_file(path: &Path, f: impl FnOnce(&mut dyn std::io::Write) -> Result<(), io::IoError>) -> anyhow::Result<()> {
    let mut w = io::create(path)?;
    f(&mut w).with_context(|| format!("writing {}", path.display()))
}
