use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::Args;
use lexiscope::corpus::{load_manifests, ImageManifest};
use lexiscope::features::{
    attach_text_embedding, build_codebook, combine, combine_pca, extract_descriptors,
    featurize_manifest, load_embedding_table, load_feature_dir, read_lxfv, reduce_sets,
    sample_descriptors, write_feature_dir, write_lxfv, Codebook, DenseGradientDescriptor,
    FeatureKind, Image, ImageSet, NativeFeaturizer, DESCRIPTOR_DIM,
};
use lexiscope::parallel::{try_map_indexed, Execution};

use crate::util::{load_language, require, usage};

#[derive(Debug, Args)]
pub struct FeaturizeArgs {
    /// color, bovw, tex, combi, vispca or combipca.
    #[arg(long)]
    kind: FeatureKind,
    /// Output feature directory; vispca and combipca take one per language.
    #[arg(long, required = true)]
    out: Vec<PathBuf>,
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// Directory holding the PPM images named by manifest image ids.
    #[arg(long)]
    images: Option<PathBuf>,
    /// Histogram bins per channel (color).
    #[arg(long, default_value_t = 16)]
    bins: usize,
    /// Codebook LXFV file (bovw).
    #[arg(long)]
    codebook: Option<PathBuf>,
    #[arg(long, default_value_t = 16)]
    patch: usize,
    #[arg(long, default_value_t = 8)]
    stride: usize,
    /// Word-embedding table (tex).
    #[arg(long)]
    embeddings: Option<PathBuf>,
    /// Visual feature directory (combi).
    #[arg(long)]
    vis: Option<PathBuf>,
    #[arg(long, default_value = "cnn")]
    vis_kind: FeatureKind,
    /// Text feature directory; combipca takes one per language.
    #[arg(long)]
    tex: Vec<PathBuf>,
    /// L2-normalize both halves before concatenating.
    #[arg(long)]
    normalize: bool,
    /// Source language directory (vispca, combipca).
    #[arg(long)]
    source: Option<PathBuf>,
    /// Target language directory (vispca, combipca).
    #[arg(long)]
    target: Option<PathBuf>,
    /// CNN feature directories, source then target (vispca, combipca).
    #[arg(long)]
    cnn: Vec<PathBuf>,
    /// Reduced dimensionality (vispca, combipca).
    #[arg(long, default_value_t = 40)]
    dim: usize,
}

fn manifests(path: Option<&PathBuf>) -> anyhow::Result<Vec<ImageManifest>> {
    let Some(path) = path else {
        return usage("--manifest is required for this kind");
    };
    require(path, "manifest")?;
    load_manifests(path).with_context(|| format!("loading {}", path.display()))
}

fn single_out(a: &FeaturizeArgs) -> anyhow::Result<&Path> {
    match &a.out[..] {
        [p] => Ok(p),
        _ => usage(format!("--kind {} takes exactly one --out", a.kind)),
    }
}

fn image_dir(a: &FeaturizeArgs) -> anyhow::Result<&Path> {
    match &a.images {
        Some(d) => {
            require(d, "image directory")?;
            Ok(d)
        }
        None => usage("--images is required for this kind"),
    }
}

pub fn featurize(a: FeaturizeArgs) -> anyhow::Result<()> {
    match a.kind {
        FeatureKind::Color | FeatureKind::Bovw => native(&a),
        FeatureKind::Tex => tex(&a),
        FeatureKind::Combi => combi(&a),
        FeatureKind::VisPca | FeatureKind::CombiPca => pca(&a),
        FeatureKind::Cnn => usage("cnn features come from an external exporter; use them directly"),
    }
}

fn native(a: &FeaturizeArgs) -> anyhow::Result<()> {
    let out = single_out(a)?;
    let images = image_dir(a)?;
    let mans = manifests(a.manifest.as_ref())?;
    let extractor = DenseGradientDescriptor {
        patch_size: a.patch,
        stride: a.stride,
    };
    let codebook;
    let featurizer = if a.kind == FeatureKind::Color {
        if a.bins == 0 {
            return usage("--bins must be at least 1");
        }
        NativeFeaturizer::Color { bins: a.bins }
    } else {
        let Some(path) = &a.codebook else {
            return usage("--codebook is required for bovw");
        };
        require(path, "codebook")?;
        codebook = Codebook::new(read_lxfv(path)?)?;
        if codebook.descriptor_dim() != DESCRIPTOR_DIM {
            anyhow::bail!(
                "codebook has dimension {}, expected {DESCRIPTOR_DIM}",
                codebook.descriptor_dim()
            );
        }
        NativeFeaturizer::Bovw {
            codebook: &codebook,
            extractor: &extractor,
        }
    };
    let sets = mans
        .iter()
        .map(|m| featurize_manifest(images, m, &featurizer, Execution::Parallel))
        .collect::<Result<Vec<_>, _>>()?;
    write_feature_dir(out, &sets)?;
    Ok(())
}

fn tex(a: &FeaturizeArgs) -> anyhow::Result<()> {
    let out = single_out(a)?;
    let mans = manifests(a.manifest.as_ref())?;
    let Some(path) = &a.embeddings else {
        return usage("--embeddings is required for tex");
    };
    require(path, "embedding table")?;
    let table = load_embedding_table(path, "")?;
    let mut sets = Vec::new();
    for m in &mans {
        if table.get(&m.word).is_none() {
            eprintln!("oov\t{}", m.word);
            continue;
        }
        sets.push(attach_text_embedding(m, &table)?);
    }
    write_feature_dir(out, &sets)?;
    Ok(())
}

fn combi(a: &FeaturizeArgs) -> anyhow::Result<()> {
    let out = single_out(a)?;
    let mans = manifests(a.manifest.as_ref())?;
    let (Some(vis), [tex]) = (&a.vis, &a.tex[..]) else {
        return usage("combi needs --vis and one --tex directory");
    };
    require(vis, "visual feature directory")?;
    require(tex, "text feature directory")?;
    let refs: Vec<&ImageManifest> = mans.iter().collect();
    let vis_sets = load_feature_dir(vis, &refs, a.vis_kind)?;
    let tex_sets = load_feature_dir(tex, &refs, FeatureKind::Tex)?;
    let sets = pair_up(&vis_sets, &tex_sets, |v, t| combine(v, t, a.normalize))?;
    write_feature_dir(out, &sets)?;
    Ok(())
}

/// Applies `f` to every word present in both families, in `vis` order.
fn pair_up(
    vis: &[ImageSet],
    tex: &[ImageSet],
    f: impl Fn(&ImageSet, &ImageSet) -> Result<ImageSet, lexiscope::features::FeatureError>,
) -> anyhow::Result<Vec<ImageSet>> {
    let mut out = Vec::new();
    for v in vis {
        if let Some(t) = tex.iter().find(|t| t.word == v.word) {
            out.push(f(v, t)?);
        }
    }
    Ok(out)
}

fn pca(a: &FeaturizeArgs) -> anyhow::Result<()> {
    let ([src_cnn, tgt_cnn], [src_out, tgt_out]) = (&a.cnn[..], &a.out[..]) else {
        return usage(format!(
            "--kind {} needs two --cnn and two --out directories (source, target)",
            a.kind
        ));
    };
    let (Some(src), Some(tgt)) = (&a.source, &a.target) else {
        return usage(format!(
            "--kind {} needs --source and --target language directories",
            a.kind
        ));
    };
    if a.dim == 0 {
        return usage("--dim must be at least 1");
    }
    let tex_dirs = if a.kind == FeatureKind::CombiPca {
        match &a.tex[..] {
            [s, t] => Some((s, t)),
            _ => return usage("combipca needs two --tex directories (source, target)"),
        }
    } else {
        None
    };
    let src_ds = load_language(src, FeatureKind::Cnn, Some(src_cnn))?;
    let tgt_ds = load_language(tgt, FeatureKind::Cnn, Some(tgt_cnn))?;
    let (src_red, tgt_red, _) = reduce_sets(&src_ds, &tgt_ds, a.dim)?;

    for (dir, reduced, out, tex) in [
        (src, &src_red, src_out, tex_dirs.map(|t| t.0)),
        (tgt, &tgt_red, tgt_out, tex_dirs.map(|t| t.1)),
    ] {
        let vis: Vec<ImageSet> = reduced.sets().into_iter().cloned().collect();
        let sets = match tex {
            None => vis,
            Some(tex) => {
                let t = load_language(dir, FeatureKind::Tex, Some(tex))?;
                let tex_sets: Vec<ImageSet> = t.sets().into_iter().cloned().collect();
                pair_up(&vis, &tex_sets, |v, t| combine_pca(v, t, a.normalize))?
            }
        };
        write_feature_dir(out, &sets)?;
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct CodebookArgs {
    #[arg(long)]
    images: PathBuf,
    /// Manifests whose images feed the sample (repeatable).
    #[arg(long, required = true)]
    manifest: Vec<PathBuf>,
    /// Number of visual words.
    #[arg(long, default_value_t = 1000)]
    size: usize,
    #[arg(long, default_value_t = 100_000)]
    max_descriptors: usize,
    #[arg(long, default_value_t = 16)]
    patch: usize,
    #[arg(long, default_value_t = 8)]
    stride: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output LXFV file, one centroid per row.
    #[arg(long)]
    out: PathBuf,
}

pub fn codebook(a: CodebookArgs) -> anyhow::Result<()> {
    require(&a.images, "image directory")?;
    if a.size == 0 {
        return usage("--size must be at least 1");
    }
    let mut ids = Vec::new();
    for path in &a.manifest {
        require(path, "manifest")?;
        for m in load_manifests(path)? {
            ids.extend(m.image_ids);
        }
    }
    let per_image = try_map_indexed(ids.len(), Execution::Parallel, |i| {
        let img = Image::load_ppm(&a.images.join(&ids[i]))?;
        extract_descriptors(&img, a.patch, a.stride)
    })?;
    let sample = sample_descriptors(&per_image, DESCRIPTOR_DIM, a.max_descriptors, a.seed)?;
    let cb = build_codebook(&sample, a.size, a.seed)?;
    if let Some(dir) = a.out.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    write_lxfv(&a.out, &cb.centroids)?;
    Ok(())
}
