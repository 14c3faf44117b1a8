#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lexiscope::corpus::{write_manifests, ContentHash, ImageManifest};
use lexiscope::features::Image;
use lexiscope::parallel::Execution;
use lexiscope::synth::{generate, SynthConfig};

pub fn lexiscope(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lexiscope"))
        .args(args)
        .env_remove("LEXISCOPE_THREADS")
        .output()
        .expect("binary runs")
}

/// Runs and asserts success, returning stdout.
pub fn ok(args: &[&str]) -> String {
    let out = lexiscope(args);
    assert!(
        out.status.success(),
        "lexiscope {args:?} failed with {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

pub fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Three words with three small PPM images each, plus a manifest.
pub fn image_corpus(dir: &Path) -> (PathBuf, PathBuf) {
    let images = dir.join("images");
    fs::create_dir_all(&images).unwrap();
    let mut manifests = Vec::new();
    for (w, word) in ["cow", "tree", "sky"].into_iter().enumerate() {
        let mut entries = Vec::new();
        for i in 0..3 {
            let img = Image::from_fn(32, 24, |x, y| {
                [
                    (x * 7 + w * 80) as u8,
                    (y * 9 + i * 40) as u8,
                    ((x ^ y) * 5 + w * 30) as u8,
                ]
            })
            .unwrap();
            let bytes = img.to_ppm_bytes();
            let id = format!("{word}_{i}.ppm");
            fs::write(images.join(&id), &bytes).unwrap();
            entries.push((id, ContentHash::of_bytes(&bytes)));
        }
        manifests.push(ImageManifest::new(word, entries).unwrap());
    }
    let manifest = dir.join("manifest.tsv");
    write_manifests(&manifest, &manifests).unwrap();
    (images, manifest)
}

/// A small synthetic corpus written as `<dir>/en`, `<dir>/de`, `<dir>/gold.tsv`.
pub fn synth_corpus(dir: &Path, seed: u64) {
    let mut cfg = SynthConfig::preset(lexiscope::synth::Preset::Uniform, seed);
    for t in &mut cfg.tiers {
        t.words = 6;
    }
    cfg.images_per_word = 8;
    cfg.dim = 16;
    generate(&cfg, Execution::Sequential)
        .unwrap()
        .write(dir)
        .unwrap();
}

/// Every regular file below `dir` with its bytes, sorted by relative path.
pub fn snapshot(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((
                    p.strip_prefix(dir).unwrap().to_path_buf(),
                    fs::read(&p).unwrap(),
                ));
            }
        }
    }
    out.sort();
    out
}

/// Runs the whole pipeline with the given thread count, writing everything
/// under `out`.
pub fn pipeline(inputs: &Path, out: &Path, threads: &str) {
    let t = |args: &[&str]| {
        let mut all = vec!["--threads", threads];
        all.extend_from_slice(args);
        ok(&all)
    };
    let (en, de, gold) = (
        inputs.join("en"),
        inputs.join("de"),
        inputs.join("gold.tsv"),
    );
    let (images, manifest) = (inputs.join("images"), inputs.join("manifest.tsv"));

    t(&[
        "synth",
        "--preset",
        "pos-gap",
        "--words",
        "5",
        "--seed",
        "8",
        "--out",
        s(&out.join("synth")),
    ]);
    t(&[
        "codebook",
        "--images",
        s(&images),
        "--manifest",
        s(&manifest),
        "--size",
        "4",
        "--seed",
        "1",
        "--out",
        s(&out.join("cb.lxfv")),
    ]);
    t(&[
        "featurize",
        "--kind",
        "color",
        "--images",
        s(&images),
        "--manifest",
        s(&manifest),
        "--out",
        s(&out.join("color")),
    ]);
    t(&[
        "featurize",
        "--kind",
        "bovw",
        "--codebook",
        s(&out.join("cb.lxfv")),
        "--images",
        s(&images),
        "--manifest",
        s(&manifest),
        "--out",
        s(&out.join("bovw")),
    ]);
    t(&[
        "featurize",
        "--kind",
        "vispca",
        "--dim",
        "4",
        "--source",
        s(&en),
        "--target",
        s(&de),
        "--cnn",
        s(&en.join("features")),
        "--cnn",
        s(&de.join("features")),
        "--out",
        s(&out.join("pca_en")),
        "--out",
        s(&out.join("pca_de")),
    ]);
    for m in ["avgmax", "maxmax", "setmean", "setmax", "knn", "knnc"] {
        t(&[
            "rank",
            "--source",
            s(&en),
            "--target",
            s(&de),
            "--method",
            m,
            "--seed",
            "2",
            "--out",
            s(&out.join("r").join(format!("{m}.tsv"))),
        ]);
    }
    for f in ["text", "csv"] {
        t(&[
            "eval",
            "--source",
            s(&en),
            "--target",
            s(&de),
            "--gold",
            s(&gold),
            "--rankings",
            s(&out.join("r")),
            "--format",
            f,
            "--out",
            s(&out.join(format!("report.{f}"))),
        ]);
    }
    t(&[
        "train-eval",
        "--source",
        s(&en),
        "--target",
        s(&de),
        "--gold",
        s(&gold),
        "--epochs",
        "30",
        "--seed",
        "4",
        "--out",
        s(&out.join("logregr.txt")),
        "--rankings-out",
        s(&out.join("logregr.tsv")),
    ]);
    t(&[
        "dispersion",
        "--dir",
        s(&en),
        "--summary",
        "--out",
        s(&out.join("dispersion.tsv")),
    ]);
    t(&[
        "dedupe",
        "--source",
        s(&en),
        "--target",
        s(&de),
        "--gold",
        s(&gold),
        "--out",
        s(&out.join("dedupe")),
    ]);
}
