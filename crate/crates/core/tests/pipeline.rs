use std::fs;
use std::io::Cursor;

use pedeval_core::camfilter::{classify_camera, CameraLabel, CameraMotionConfig};
use pedeval_core::compare::{compare_reports, scene_report_with, ReportOptions};
use pedeval_core::dynamics::{voronoi_cells, ConvexPolygon, DynamicsConfig, Extent};
use pedeval_core::geometry::Homography;
use pedeval_core::ingest::{
    load_frames, parse_homography, parse_mot, tracks_from_detections, validate_coverage, write_pgm,
};
use pedeval_core::synth::{pan_sequence, random_scene, SceneSpec};
use pedeval_core::{Error, SceneCalibration, TrajectorySet, WorldPoint};
use proptest::prelude::*;

#[test]
fn mot_to_world_tracks() {
    let mot = "\
1,7,100,200,20,60,0.8,-1,-1,-1
2,7,104,200,20,60,-1,-1,-1,-1
1,3,300,100,10,30,1.0,-1,-1,-1
3,7,108,200,20,60,0.7,-1,-1,-1
";
    let h = parse_homography(Cursor::new("0.01 0 0\n0 0.01 0\n0 0 1\n")).unwrap();
    let calib = SceneCalibration::new(h, 25.0, "lab").unwrap();
    let table = parse_mot(Cursor::new(mot), "inline").unwrap();
    assert_eq!(table.len(), 4);
    assert_eq!(table.detections[1].confidence, None);
    let set = tracks_from_detections(&table, &calib).unwrap();
    let ids: Vec<i64> = set.trajectories().iter().map(|t| t.id()).collect();
    assert_eq!(ids, vec![3, 7]);
    let walker = &set.trajectories()[1];
    let xs: Vec<(u64, f64, f64)> = walker.samples().iter().map(|s| (s.frame, s.position.x, s.position.y)).collect();
    for (got, want) in xs.iter().zip([(0, 1.1, 2.6), (1, 1.14, 2.6), (2, 1.18, 2.6)]) {
        assert_eq!(got.0, want.0);
        assert!((got.1 - want.1).abs() < 1e-12 && (got.2 - want.2).abs() < 1e-12, "{got:?}");
    }
    assert!(!validate_coverage(&set, 1000).satisfied);
}

#[test]
fn duplicate_detection_rejects_table() {
    let mot = "1,7,100,200,20,60\n1,7,101,200,20,60\n";
    let table = parse_mot(Cursor::new(mot), "inline").unwrap();
    let calib = SceneCalibration::new(Homography::IDENTITY, 16.0, "s").unwrap();
    assert_eq!(tracks_from_detections(&table, &calib), Err(Error::DuplicateSample { id: 7, frame: 0 }));
}

#[test]
fn frames_from_disk_are_classified() {
    let dir = tempfile::tempdir().unwrap();
    let seq = pan_sequence(128, 96, 17, 16.0, (-6.0, 0.0), 4);
    for (k, f) in seq.frames().iter().enumerate() {
        write_pgm(f, fs::File::create(dir.path().join(format!("{k:02}.pgm"))).unwrap()).unwrap();
    }
    fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
    let loaded = load_frames(dir.path(), 16.0).unwrap();
    assert_eq!(loaded.len(), 17);
    assert_eq!(loaded.frames()[3].data, seq.frames()[3].data);
    let v = classify_camera(&loaded, &CameraMotionConfig::default()).unwrap();
    assert_eq!(v.label, CameraLabel::Moving);
}

#[test]
fn report_comparison_with_shared_extent() {
    let cfg = DynamicsConfig::default();
    let gt = random_scene(&SceneSpec::default(), 1);
    let model = random_scene(&SceneSpec::default(), 2);
    let opts = ReportOptions {
        heatmap_extent: Extent::of(&gt),
        boundary: None,
    };
    let a = scene_report_with(&gt, &cfg, "gt", &opts).unwrap();
    let b = scene_report_with(&model, &cfg, "m", &opts).unwrap();
    let same = scene_report_with(&gt, &cfg, "copy", &opts).unwrap();
    let t = compare_reports(&a, &[b, same]).unwrap();
    for metric in ["longitudinal_velocity_emd", "nearest_neighbor_l1", "position_heatmap_l1"] {
        let row = t.row(metric).unwrap();
        assert!(!row.partial, "{metric}");
        assert_eq!(row.cells[1].value, Some(0.0), "{metric}");
        assert!(row.cells[0].value.unwrap() > 0.0, "{metric}");
        assert_eq!(t.closest_label(metric), Some("copy"));
    }
    // without a shared extent the heatmaps are binned differently
    let c = scene_report_with(&model, &cfg, "m", &ReportOptions::default()).unwrap();
    let t = compare_reports(&a, &[c]).unwrap();
    let row = t.row("position_heatmap_l1").unwrap();
    assert_eq!(row.cells[0].error.as_ref().unwrap().kind, "BinningMismatch");
}

#[test]
fn trajectory_json_schema() {
    let set = random_scene(&SceneSpec { agents: 3, frames: 5, ..SceneSpec::default() }, 9);
    let json = serde_json::to_value(&set).unwrap();
    assert_eq!(json["schema_version"], 1);
    assert_eq!(json["scene_id"], "synthetic");
    let first = &json["trajectories"][0];
    assert!(first["id"].is_i64());
    assert_eq!(first["samples"][0].as_array().unwrap().len(), 3);
    let back: TrajectorySet = serde_json::from_value(json).unwrap();
    assert_eq!(back, set);
}

fn seeds_in_box() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.001f64..9.999, 0.001f64..4.999), 1..40)
}

proptest! {
    #[test]
    fn voronoi_tiles_the_box(pts in seeds_in_box()) {
        let boundary = ConvexPolygon::rectangle(0.0, 0.0, 10.0, 5.0).unwrap();
        let seeds: Vec<(i64, WorldPoint)> = pts.iter().enumerate().map(|(i, &(x, y))| (i as i64, WorldPoint::new(x, y))).collect();
        let cells = voronoi_cells(&seeds, &boundary).unwrap();
        let total: f64 = cells.iter().map(|c| c.area).sum();
        prop_assert!((total - 50.0).abs() < 1e-9 * 50.0);
        for (c, (_, p)) in cells.iter().zip(&seeds) {
            prop_assert!(c.area > 0.0);
            prop_assert!(c.contains(*p, 1e-9));
        }
    }

    #[test]
    fn coincident_seeds_still_tile(x in 1.0f64..9.0, y in 1.0f64..4.0, copies in 2usize..6) {
        let boundary = ConvexPolygon::rectangle(0.0, 0.0, 10.0, 5.0).unwrap();
        let seeds: Vec<(i64, WorldPoint)> = (0..copies).map(|i| (i as i64, WorldPoint::new(x, y))).collect();
        let cells = voronoi_cells(&seeds, &boundary).unwrap();
        let total: f64 = cells.iter().map(|c| c.area).sum();
        prop_assert!((total - 50.0).abs() < 1e-6);
    }
}
