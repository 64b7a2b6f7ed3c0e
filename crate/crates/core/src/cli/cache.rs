//! On-disk memo of p^k − 1 factorizations under `$PRIMPAIR_CACHE_DIR`,
//! one JSON file per (p, k). Files are revalidated on load (primality of
//! every factor and the product), so a corrupt cache can only cost time; corrupt
//! entries are overwritten.

use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use crate::arith::Factorization;
use crate::criteria::{cached_factorization, seed_factorization};

pub fn path(dir: &Path, p: u64, k: u32) -> PathBuf {
    dir.join(format!("factor-{p}-{k}.json"))
}

pub fn load(dir: Option<&Path>, p: u64, ks: RangeInclusive<u32>) {
    let Some(dir) = dir else { return };
    for k in ks {
        if cached_factorization(p, k).is_some() {
            continue;
        }
        let Ok(text) = fs::read_to_string(path(dir, p, k)) else {
            continue;
        };
        match serde_json::from_str::<Factorization>(&text) {
            Ok(f) => {
                if let Err(e) = seed_factorization(p, k, f) {
                    eprintln!("primpair: ignoring cache entry for ({p}, {k}): {e}");
                }
            }
            Err(e) => eprintln!("primpair: ignoring cache entry for ({p}, {k}): {e}"),
        }
    }
}

pub fn store(dir: Option<&Path>, p: u64, ks: RangeInclusive<u32>) {
    let Some(dir) = dir else { return };
    if let Err(e) = fs::create_dir_all(dir) {
        eprintln!("primpair: cannot create cache dir {}: {e}", dir.display());
        return;
    }
    for k in ks {
        let target = path(dir, p, k);
        let valid = fs::read_to_string(&target)
            .ok()
            .is_some_and(|t| serde_json::from_str::<Factorization>(&t).is_ok());
        if valid {
            continue;
        }
        let Some(f) = cached_factorization(p, k) else {
            continue;
        };
        let json = serde_json::to_string(&*f).expect("factorization serializes");
        // Write-then-rename so concurrent runs never see a partial file.
        let tmp = dir.join(format!(".factor-{p}-{k}.{}.tmp", std::process::id()));
        let written = fs::write(&tmp, json).and_then(|()| fs::rename(&tmp, &target));
        if let Err(e) = written {
            let _ = fs::remove_file(&tmp);
            eprintln!("primpair: cannot write {}: {e}", target.display());
        }
    }
}
