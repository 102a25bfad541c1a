//! The scene files shipped in `scenes/` describe the generated compositions.

use std::path::PathBuf;

use orbtrace::scene::{
    align_view, make_salvator_scene, make_three_lines_scene, parse_scene, OrbSpec, SalvatorOverrides, Thickness,
};

fn load(name: &str) -> orbtrace::scene::SceneConfig {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../scenes")
        .join(name);
    parse_scene(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

#[test]
fn default_scene_file_matches_generator() {
    let generated = align_view(&make_salvator_scene(&SalvatorOverrides {
        thickness: Some(Thickness::Shell(0.13)),
        ..Default::default()
    }))
    .unwrap();
    let mut file = load("default.scene");
    assert!(file.relief.convergence_point.is_none());
    file.relief.convergence_point = generated.relief.convergence_point;
    assert_eq!(file, generated);
}

#[test]
fn three_lines_scene_file_matches_generator() {
    let ball = OrbSpec {
        thickness: Thickness::Shell(0.13),
        ..OrbSpec::default()
    };
    assert_eq!(
        load("three_lines.scene"),
        make_three_lines_scene(&ball, false, 4.0).unwrap()
    );
}
