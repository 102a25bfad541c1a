use serde::Serialize;

use crate::analysis::{
    detect_double_contour, detect_inversion, fit_fold_convergence, image_rmse, image_rmse_affine,
    measure_line_continuity, sample_fold_edges, Circle, ContinuityOptions, ContinuityReport, ConvergenceFit,
    DoubleContour, InversionResult, LineStatus, Mask,
};
use crate::geom::Point2;
use crate::optics::{CalciteSpec, DielectricSpec, GLASS_IOR};
use crate::render::{birefringent_render_pair, CropWindow, Image};
use crate::scene::{
    align_view, make_salvator_scene, make_three_lines_scene, OrbMaterial, OrbSpec, SalvatorOverrides, Scene,
    SceneConfig, Thickness,
};

use super::setup::{at_resolution, fold_lines, render_settings, render_view, silhouette_of, stroke_lines, Stage};
use super::{ExperimentError, ExperimentId, ExperimentOutcome, ExperimentSettings, SWEEP_THICKNESSES_MM};

const SHELL_MM: f64 = 1.3;
/// Thicknesses over which displacement must not decrease.
pub const MONOTONE_THICKNESSES_MM: [f64; 5] = [0.5, 1.3, 2.0, 2.6, 3.0];
const LINE_SPACING_CM: f64 = 4.0;
/// Interior pixels this close to the outline are left out of image
/// differences.
const RMSE_BAND_PX: f64 = 3.0;

fn default_scene(thickness: Thickness) -> Result<SceneConfig, ExperimentError> {
    Ok(align_view(&make_salvator_scene(&SalvatorOverrides {
        thickness: Some(thickness),
        ..Default::default()
    }))?)
}

fn clear_glass(cfg: &mut SceneConfig) {
    cfg.orb.material = OrbMaterial::Dielectric(DielectricSpec::clear(GLASS_IOR));
}

fn shell(mm: f64) -> Thickness {
    Thickness::Shell(mm / 10.0)
}

fn fold_options(settings: &ExperimentSettings) -> ContinuityOptions {
    ContinuityOptions {
        search_half_width: settings.px(12.0),
        ..ContinuityOptions::default()
    }
}

fn line_options(settings: &ExperimentSettings) -> ContinuityOptions {
    ContinuityOptions {
        search_half_width: settings.px(30.0),
        ..ContinuityOptions::default()
    }
}

fn report<T: Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("report serialises")
}

fn outcome<T: Serialize>(
    id: ExperimentId,
    passed: bool,
    summary: Vec<String>,
    value: &T,
    images: Vec<(String, Image)>,
) -> ExperimentOutcome {
    ExperimentOutcome {
        id,
        passed,
        summary,
        report: report(value),
        images,
        csv: None,
    }
}

// Solid and hollow orbs against the bare background.

#[derive(Debug, Clone, Serialize)]
pub struct SolidVsHollow {
    pub silhouette: Circle,
    pub solid: InversionResult,
    pub hollow: InversionResult,
    pub rmse_solid: f64,
    pub rmse_hollow: f64,
    /// Diagnostics: the same differences after an affine brightness match.
    pub rmse_solid_affine: f64,
    pub rmse_hollow_affine: f64,
    pub mask_pixels: usize,
}

impl SolidVsHollow {
    pub fn rmse_ratio(&self) -> f64 {
        self.rmse_solid / self.rmse_hollow
    }

    pub fn predicate(&self) -> bool {
        self.solid.score > 0.0 && 0.0 > self.hollow.score
    }
}

pub fn solid_vs_hollow(
    settings: &ExperimentSettings,
) -> Result<(SolidVsHollow, Vec<(String, Image)>), ExperimentError> {
    let stage = Stage::Orb(1.05);
    let mut bare = default_scene(shell(SHELL_MM))?;
    bare.orb.enabled = false;
    let mut hollow = default_scene(shell(SHELL_MM))?;
    clear_glass(&mut hollow);
    let mut solid = default_scene(Thickness::Solid)?;
    clear_glass(&mut solid);
    let bare = render_view(&bare, settings, stage)?;
    let hollow = render_view(&hollow, settings, stage)?;
    let solid = render_view(&solid, settings, stage)?;
    let c = solid.silhouette;
    let (w, h) = (bare.image.width, bare.image.height);
    let mask = Mask::interior(w, h, c, RMSE_BAND_PX)
        .without_highlights(&hollow.image, &bare.image)
        .without_highlights(&solid.image, &bare.image);
    let result = SolidVsHollow {
        silhouette: c,
        solid: detect_inversion(&solid.image, &bare.image, c)?,
        hollow: detect_inversion(&hollow.image, &bare.image, c)?,
        rmse_solid: image_rmse(&solid.image, &bare.image, &mask)?,
        rmse_hollow: image_rmse(&hollow.image, &bare.image, &mask)?,
        rmse_solid_affine: image_rmse_affine(&solid.image, &bare.image, &mask)?,
        rmse_hollow_affine: image_rmse_affine(&hollow.image, &bare.image, &mask)?,
        mask_pixels: mask.count(),
    };
    let images = vec![
        ("no_orb".to_string(), bare.image),
        ("hollow".to_string(), hollow.image),
        ("solid".to_string(), solid.image),
    ];
    Ok((result, images))
}

// Three lines seen through a ball.

#[derive(Debug, Clone, Serialize)]
pub struct ThreeLines {
    pub hollow: ContinuityReport,
    pub solid: ContinuityReport,
}

fn is_outer_distorted(r: &ContinuityReport, id: &str) -> bool {
    r.line(id)
        .is_some_and(|l| l.status == LineStatus::Measured && l.displacement_px >= 2.0 && l.curvature_flag)
}

fn middle_connected(r: &ContinuityReport) -> bool {
    r.line("middle")
        .is_some_and(|l| l.status == LineStatus::Measured && l.connected)
}

impl ThreeLines {
    pub fn predicate(&self) -> bool {
        middle_connected(&self.hollow)
            && middle_connected(&self.solid)
            && is_outer_distorted(&self.hollow, "left")
            && is_outer_distorted(&self.hollow, "right")
    }
}

fn ball(thickness: Thickness) -> OrbSpec {
    OrbSpec {
        thickness,
        material: OrbMaterial::Dielectric(DielectricSpec::clear(GLASS_IOR)),
        ..OrbSpec::default()
    }
}

fn lines_view(
    thickness: Thickness,
    bent: bool,
    settings: &ExperimentSettings,
) -> Result<(ContinuityReport, Image), ExperimentError> {
    let cfg = make_three_lines_scene(&ball(thickness), bent, LINE_SPACING_CM)?;
    let view = render_view(&cfg, settings, Stage::Orb(1.35))?;
    let lines = stroke_lines(&view.scene);
    let report = measure_line_continuity(&view.image, view.silhouette, &lines, &line_options(settings))?;
    Ok((report, view.image))
}

pub fn three_lines(settings: &ExperimentSettings) -> Result<(ThreeLines, Vec<(String, Image)>), ExperimentError> {
    let (hollow, hi) = lines_view(shell(SHELL_MM), false, settings)?;
    let (solid, si) = lines_view(Thickness::Solid, false, settings)?;
    Ok((
        ThreeLines { hollow, solid },
        vec![("hollow".into(), hi), ("solid".into(), si)],
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct ThreeLinesBent {
    pub hollow: ContinuityReport,
}

impl ThreeLinesBent {
    pub fn middle_displacement(&self) -> Option<f64> {
        self.hollow
            .line("middle")
            .filter(|l| l.status != LineStatus::Failed)
            .map(|l| l.displacement_px)
    }

    pub fn predicate(&self) -> bool {
        self.middle_displacement().is_some_and(|d| d >= 2.0)
    }
}

pub fn three_lines_bent(
    settings: &ExperimentSettings,
) -> Result<(ThreeLinesBent, Vec<(String, Image)>), ExperimentError> {
    let (hollow, image) = lines_view(shell(SHELL_MM), true, settings)?;
    Ok((ThreeLinesBent { hollow }, vec![("hollow_bent".into(), image)]))
}

// Folds behind the default orb.

#[derive(Debug, Clone, Serialize)]
pub struct FoldConvergence {
    pub fit: ConvergenceFit,
    pub projected_center: Point2,
    pub distance_px: f64,
    pub exempt: Vec<usize>,
}

impl FoldConvergence {
    pub fn predicate(&self) -> bool {
        self.distance_px < 1.0 && self.exempt.iter().all(|i| self.fit.outliers.contains(i))
    }
}

pub fn fold_convergence(
    settings: &ExperimentSettings,
) -> Result<(FoldConvergence, Vec<(String, Image)>), ExperimentError> {
    let cfg = default_scene(shell(SHELL_MM))?;
    let view = render_view(&cfg, settings, Stage::Around(300.0))?;
    let folds = fold_lines(&view.scene);
    let lines: Vec<_> = folds.iter().map(|(l, _)| l.clone()).collect();
    let samples = sample_fold_edges(
        &view.image,
        Some(view.silhouette),
        &lines,
        settings.px(8.0),
        0.3,
        settings.px(2.0),
    );
    let fit = fit_fold_convergence(&samples)?;
    let projected_center = view
        .scene
        .camera
        .project(view.scene.config.effective_orb_center())
        .ok_or(ExperimentError::NoSilhouette)?;
    let result = FoldConvergence {
        distance_px: (fit.point - projected_center).length(),
        fit,
        projected_center,
        exempt: folds
            .iter()
            .enumerate()
            .filter(|(_, (_, e))| *e)
            .map(|(i, _)| i)
            .collect(),
    };
    Ok((result, vec![("folds".into(), view.image)]))
}

// Fold continuity under thickness and placement changes.

#[derive(Debug, Clone, Serialize)]
pub struct FoldContinuity {
    pub report: ContinuityReport,
    pub exempt: Vec<String>,
}

impl FoldContinuity {
    /// Largest displacement over the converging folds; `None` if none of
    /// them could be measured.
    pub fn max_displacement(&self) -> Option<f64> {
        self.report
            .lines
            .iter()
            .filter(|l| !self.exempt.contains(&l.id) && l.status != LineStatus::Failed)
            .map(|l| l.displacement_px)
            .reduce(f64::max)
    }
}

fn fold_continuity(
    cfg: &SceneConfig,
    settings: &ExperimentSettings,
) -> Result<(FoldContinuity, Image), ExperimentError> {
    let view = render_view(cfg, settings, Stage::Orb(1.3))?;
    let folds = fold_lines(&view.scene);
    let lines: Vec<_> = folds.iter().map(|(l, _)| l.clone()).collect();
    let report = measure_line_continuity(&view.image, view.silhouette, &lines, &fold_options(settings))?;
    let exempt = folds.into_iter().filter(|(_, e)| *e).map(|(l, _)| l.id).collect();
    Ok((FoldContinuity { report, exempt }, view.image))
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub thickness_mm: f64,
    pub max_displacement_px: Option<f64>,
    pub folds: FoldContinuity,
}

#[derive(Debug, Clone, Serialize)]
pub struct ThicknessSweep {
    pub rows: Vec<SweepRow>,
}

impl ThicknessSweep {
    pub fn at(&self, mm: f64) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| (r.thickness_mm - mm).abs() < 1e-9)
            .and_then(|r| r.max_displacement_px)
    }

    /// Displacements never decrease with thickness; rows that could not be
    /// measured break the chain.
    pub fn monotone(&self, over: &[f64]) -> bool {
        let values: Option<Vec<f64>> = over.iter().map(|&mm| self.at(mm)).collect();
        values.is_some_and(|v| v.windows(2).all(|w| w[1] >= w[0]))
    }

    pub fn predicate(&self) -> bool {
        self.monotone(&MONOTONE_THICKNESSES_MM)
            && self.at(1.3).is_some_and(|d| d < 1.0)
            && self.at(2.6).is_some_and(|d| d >= 1.0)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["thickness_mm", "max_displacement_px", "status"])
            .expect("in-memory csv");
        for r in &self.rows {
            let (d, status) = match r.max_displacement_px {
                Some(d) => (format!("{d:.4}"), "measured"),
                None => (String::new(), "failed"),
            };
            w.write_record([format!("{}", r.thickness_mm), d, status.to_string()])
                .expect("in-memory csv");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv")).expect("csv is utf-8")
    }
}

pub fn thickness_sweep_over(
    thicknesses_mm: &[f64],
    settings: &ExperimentSettings,
) -> Result<(ThicknessSweep, Vec<(String, Image)>), ExperimentError> {
    let mut rows = Vec::new();
    let mut images = Vec::new();
    for &mm in thicknesses_mm {
        let (folds, image) = fold_continuity(&default_scene(shell(mm))?, settings)?;
        rows.push(SweepRow {
            thickness_mm: mm,
            max_displacement_px: folds.max_displacement(),
            folds,
        });
        images.push((format!("shell_{mm}mm"), image));
    }
    Ok((ThicknessSweep { rows }, images))
}

#[derive(Debug, Clone, Serialize)]
pub struct Shift {
    pub centred: FoldContinuity,
    pub shifted: FoldContinuity,
}

impl Shift {
    pub fn predicate(&self) -> bool {
        self.centred.max_displacement().is_some_and(|d| d < 1.0)
            && self.shifted.max_displacement().is_some_and(|d| d >= 2.0)
    }
}

/// The orb moved 1 cm to the left while camera and relief stay put.
pub fn shift_1cm(settings: &ExperimentSettings) -> Result<(Shift, Vec<(String, Image)>), ExperimentError> {
    let centred_cfg = default_scene(shell(SHELL_MM))?;
    let mut shifted_cfg = centred_cfg.clone();
    shifted_cfg.orb.lateral_shift = 1.0;
    let (centred, ci) = fold_continuity(&centred_cfg, settings)?;
    let (shifted, si) = fold_continuity(&shifted_cfg, settings)?;
    Ok((
        Shift { centred, shifted },
        vec![("centred".into(), ci), ("shifted".into(), si)],
    ))
}

// Calcite as two averaged solid renders.

#[derive(Debug, Clone, Serialize)]
pub struct Calcite {
    pub inversion: InversionResult,
    pub contours: DoubleContour,
    /// The same scan on a single-index render, as a control.
    pub single_index_contours: DoubleContour,
}

impl Calcite {
    pub fn predicate(&self) -> bool {
        self.inversion.score > 0.0 && self.contours.detected
    }
}

fn averaged(
    cfg: &SceneConfig,
    settings: &ExperimentSettings,
    factor: f64,
) -> Result<(Image, Scene, Circle), ExperimentError> {
    let cfg = at_resolution(cfg, settings);
    let c = silhouette_of(&cfg).ok_or(ExperimentError::NoSilhouette)?;
    let scene = Scene::build(&cfg, std::path::Path::new("."))?;
    let crop = CropWindow::around(
        c.center.x,
        c.center.y,
        c.radius * factor,
        cfg.camera.width,
        cfg.camera.height,
    );
    let image = birefringent_render_pair(
        &scene,
        &CalciteSpec::default(),
        &render_settings(settings, crop),
        settings.threads,
    )?;
    Ok((image, scene, c))
}

pub fn calcite_birefringence(
    settings: &ExperimentSettings,
) -> Result<(Calcite, Vec<(String, Image)>), ExperimentError> {
    let calcite = OrbMaterial::Calcite(CalciteSpec::default());
    let mut bare = default_scene(Thickness::Solid)?;
    bare.orb.enabled = false;
    let bare = render_view(&bare, settings, Stage::Orb(1.05))?;
    let mut solid = default_scene(Thickness::Solid)?;
    solid.orb.material = calcite;
    let (avg, _, c) = averaged(&solid, settings, 1.05)?;
    let inversion = detect_inversion(&avg, &bare.image, c)?;

    let lines = make_three_lines_scene(
        &OrbSpec {
            thickness: Thickness::Solid,
            material: calcite,
            ..OrbSpec::default()
        },
        false,
        LINE_SPACING_CM,
    )?;
    let (lines_avg, _, lc) = averaged(&lines, settings, 1.05)?;
    let exclude = settings.px(12.0);
    let contours = detect_double_contour(&lines_avg, lc, exclude)?;
    let mut single = lines.clone();
    single.orb.material = OrbMaterial::Dielectric(DielectricSpec::clear(CalciteSpec::default().ior_ordinary));
    let single = render_view(&single, settings, Stage::Orb(1.05))?;
    let single_index_contours = detect_double_contour(&single.image, single.silhouette, exclude)?;
    let result = Calcite {
        inversion,
        contours,
        single_index_contours,
    };
    Ok((
        result,
        vec![
            ("calcite_default".into(), avg),
            ("calcite_lines".into(), lines_avg),
            ("ordinary_lines".into(), single.image),
        ],
    ))
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or("failed".to_string(), |d| format!("{d:.3} px"))
}

fn continuity_lines(label: &str, r: &ContinuityReport) -> Vec<String> {
    r.lines
        .iter()
        .map(|l| {
            format!(
                "{label} {}: {:?}, displacement {:.3} px, curved {}, connected {}",
                l.id, l.status, l.displacement_px, l.curvature_flag, l.connected
            )
        })
        .collect()
}

/// Runs one experiment end to end.
pub fn run_experiment(id: ExperimentId, settings: &ExperimentSettings) -> Result<ExperimentOutcome, ExperimentError> {
    Ok(match id {
        ExperimentId::SolidVsHollow => {
            let (r, images) = solid_vs_hollow(settings)?;
            let summary = vec![
                format!("solid inversion score {:.3} ({:?})", r.solid.score, r.solid.status),
                format!("hollow inversion score {:.3} ({:?})", r.hollow.score, r.hollow.status),
                format!(
                    "interior rmse: solid {:.5}, hollow {:.5}, ratio {:.2}",
                    r.rmse_solid,
                    r.rmse_hollow,
                    r.rmse_ratio()
                ),
                format!(
                    "brightness-matched rmse (diagnostic): solid {:.5}, hollow {:.5}",
                    r.rmse_solid_affine, r.rmse_hollow_affine
                ),
            ];
            outcome(id, r.predicate(), summary, &r, images)
        }
        ExperimentId::ThreeLines => {
            let (r, images) = three_lines(settings)?;
            let mut summary = continuity_lines("hollow", &r.hollow);
            summary.extend(continuity_lines("solid", &r.solid));
            outcome(id, r.predicate(), summary, &r, images)
        }
        ExperimentId::ThreeLinesBent => {
            let (r, images) = three_lines_bent(settings)?;
            let mut summary = continuity_lines("hollow", &r.hollow);
            summary.push(format!(
                "bent middle line displacement {}",
                fmt_opt(r.middle_displacement())
            ));
            outcome(id, r.predicate(), summary, &r, images)
        }
        ExperimentId::FoldConvergence => {
            let (r, images) = fold_convergence(settings)?;
            let summary = vec![
                format!(
                    "convergence point ({:.2}, {:.2}), projected orb centre ({:.2}, {:.2}), distance {:.3} px",
                    r.fit.point.x, r.fit.point.y, r.projected_center.x, r.projected_center.y, r.distance_px
                ),
                format!(
                    "rms residual {:.3} px, outliers {:?}, exempt {:?}",
                    r.fit.rms_residual, r.fit.outliers, r.exempt
                ),
            ];
            outcome(id, r.predicate(), summary, &r, images)
        }
        ExperimentId::ThicknessSweep => {
            let (r, images) = thickness_sweep_over(&SWEEP_THICKNESSES_MM, settings)?;
            let summary = r
                .rows
                .iter()
                .map(|row| {
                    format!(
                        "{} mm: max fold displacement {}",
                        row.thickness_mm,
                        fmt_opt(row.max_displacement_px)
                    )
                })
                .collect();
            let mut out = outcome(id, r.predicate(), summary, &r, images);
            out.csv = Some(r.to_csv());
            out
        }
        ExperimentId::Shift1cm => {
            let (r, images) = shift_1cm(settings)?;
            let summary = vec![
                format!(
                    "centred: max fold displacement {}",
                    fmt_opt(r.centred.max_displacement())
                ),
                format!(
                    "shifted 1 cm: max fold displacement {}",
                    fmt_opt(r.shifted.max_displacement())
                ),
            ];
            outcome(id, r.predicate(), summary, &r, images)
        }
        ExperimentId::CalciteBirefringence => {
            let (r, images) = calcite_birefringence(settings)?;
            let summary = vec![
                format!("averaged inversion score {:.3}", r.inversion.score),
                format!(
                    "double contour: left {}/{} rows, right {}/{} rows, detected {}",
                    r.contours.left.rows_bimodal,
                    r.contours.left.rows_with_track,
                    r.contours.right.rows_bimodal,
                    r.contours.right.rows_with_track,
                    r.contours.detected
                ),
                format!("single index control detected {}", r.single_index_contours.detected),
            ];
            outcome(id, r.predicate(), summary, &r, images)
        }
    })
}
