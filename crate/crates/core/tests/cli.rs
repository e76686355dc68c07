use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempaug::io::{import_frames, read_clip, read_label, write_clip};
use tempaug::{rng_derive, Clip, Error, FormatError};

fn tempaug(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tempaug"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_random(path: &Path, seed: u64, t: usize, h: usize, w: usize) -> Clip {
    let mut rng = rng_derive(seed, 0, 0);
    let clip = Clip::from_fn(t, h, w, 3, |_, _, _, _| rng.below(256) as u8).unwrap();
    write_clip(&clip, path).unwrap();
    clip
}

#[test]
fn inspect_reports_written_dims() {
    let dir = tempfile::tempdir().unwrap();
    let clip_path = dir.path().join("a.clip");
    write_random(&clip_path, 1, 3, 5, 7);
    let out = tempaug(&["inspect", "--in", s(&clip_path)]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["magic"], "CLIP");
    assert_eq!(
        (
            v["t"].as_u64(),
            v["h"].as_u64(),
            v["w"].as_u64(),
            v["c"].as_u64()
        ),
        (Some(3), Some(5), Some(7), Some(3))
    );
    assert_eq!(v["payload_bytes"], 3 * 5 * 7 * 3);
    assert!(v["label"].is_null());
}

#[test]
fn mix_is_reproducible_and_writes_label() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.clip"), dir.path().join("b.clip"));
    write_random(&a, 1, 8, 6, 6);
    write_random(&b, 2, 8, 6, 6);
    let mut outputs = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("m{run}.clip"));
        let label = dir.path().join(format!("m{run}.label.json"));
        let st = tempaug(&[
            "mix",
            "--method",
            "fademixup",
            "--seed",
            "42",
            "--a",
            s(&a),
            "--b",
            s(&b),
            "--label-a",
            "3",
            "--label-b",
            "9",
            "--num-classes",
            "10",
            "--out",
            s(&out),
            "--out-label",
            s(&label),
        ]);
        assert_eq!(
            st.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&st.stderr)
        );
        outputs.push((fs::read(&out).unwrap(), fs::read(&label).unwrap()));
        let l = read_label(&label).unwrap();
        assert_eq!(l.num_classes(), 10);
        assert!((l.weight(3) + l.weight(9) - 1.0).abs() <= 1e-9);
    }
    assert_eq!(outputs[0], outputs[1]);

    // inspect picks up the sidecar
    let out = tempaug(&[
        "inspect",
        "--in",
        s(&dir.path().join("m0.clip")),
        "--label",
        s(&dir.path().join("m0.label.json")),
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["label"]["num_classes"], 10);
}

#[test]
fn apply_keeps_dims() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in.clip");
    let clip = write_random(&input, 5, 6, 9, 11);
    for op in [
        "randaugment-t",
        "randaugment",
        "cutout",
        "frame-cutout",
        "cube-cutout",
        "rotate",
        "equalize",
    ] {
        let out = dir.path().join(format!("{op}.clip"));
        let st = tempaug(&[
            "apply",
            "--op",
            op,
            "--mode",
            "temporal+",
            "--m",
            "5",
            "--in",
            s(&input),
            "--out",
            s(&out),
            "--box-h",
            "4",
            "--box-w",
            "4",
            "--frames",
            "2",
        ]);
        assert_eq!(
            st.status.code(),
            Some(0),
            "{op}: {}",
            String::from_utf8_lossy(&st.stderr)
        );
        assert_eq!(read_clip(&out).unwrap().dims(), clip.dims(), "{op}");
    }
}

#[test]
fn usage_errors_list_valid_names() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.clip");
    write_random(&a, 1, 2, 3, 3);
    let out = tempaug(&[
        "mix",
        "--method",
        "blendmix",
        "--a",
        s(&a),
        "--b",
        s(&a),
        "--label-a",
        "0",
        "--label-b",
        "1",
        "--out",
        "x",
        "--out-label",
        "y",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cubecutmixup"));

    let out = tempaug(&["apply", "--op", "invert", "--in", s(&a), "--out", "x"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("randaugment-t") && err.contains("sharpness"),
        "{err}"
    );

    assert_eq!(
        tempaug(&[
            "apply",
            "--op",
            "rotate",
            "--m",
            "11",
            "--in",
            s(&a),
            "--out",
            "x"
        ])
        .status
        .code(),
        Some(1)
    );
    assert_eq!(tempaug(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(tempaug(&["inspect"]).status.code(), Some(1));
    assert_eq!(tempaug(&["--version"]).status.code(), Some(0));
}

#[test]
fn missing_input_is_a_format_error() {
    let out = tempaug(&["inspect", "--in", "/nonexistent/clip.clip"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.clip");
    write_random(&a, 1, 2, 8, 8);
    fs::write(dir.path().join("list.tsv"), "a.clip\t0\n").unwrap();
    fs::write(
        dir.path().join("cfg.json"),
        r#"{"crop_size": 8, "jitter_range": [8, 8], "bogus": 1}"#,
    )
    .unwrap();
    let out = tempaug(&[
        "pipeline",
        "--config",
        s(&dir.path().join("cfg.json")),
        "--in-list",
        s(&dir.path().join("list.tsv")),
        "--out-dir",
        s(&dir.path().join("out")),
    ]);
    assert_eq!(
        out.status.code(),
        Some(1),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn pipeline_with_sidecar_labels_and_single_entry() {
    let dir = tempfile::tempdir().unwrap();
    write_random(&dir.path().join("a.clip"), 1, 3, 10, 12);
    fs::write(
        dir.path().join("a.json"),
        r#"{"num_classes": 4, "weights": {"2": 0.25, "3": 0.75}}"#,
    )
    .unwrap();
    fs::write(dir.path().join("list.tsv"), "# one clip\na.clip\ta.json\n").unwrap();
    fs::write(
        dir.path().join("cfg.json"),
        r#"{"crop_size": 8, "jitter_range": [8, 10], "mix_method": {"method": "mixup", "alpha": 1.0}, "mix_prob": 1.0}"#,
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = tempaug(&[
        "pipeline",
        "--config",
        s(&dir.path().join("cfg.json")),
        "--in-list",
        s(&dir.path().join("list.tsv")),
        "--out-dir",
        s(&out_dir),
        "--workers",
        "2",
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let clip = read_clip(out_dir.join("00000_a.clip")).unwrap();
    assert_eq!(clip.dims(), (3, 8, 8, 3));
    // mixed with itself: the label is unchanged
    let label = read_label(out_dir.join("00000_a.label.json")).unwrap();
    assert!((label.weight(3) - 0.75).abs() <= 1e-12);
}

fn write_ppm(path: &Path, w: usize, h: usize, data: &[u8]) {
    let mut bytes = format!("P6\n{w} {h}\n255\n").into_bytes();
    bytes.extend_from_slice(data);
    fs::write(path, bytes).unwrap();
}

#[test]
fn import_single_ppm() {
    let dir = tempfile::tempdir().unwrap();
    let px: Vec<u8> = (1..=12).map(|v| v * 20).collect();
    write_ppm(&dir.path().join("f.ppm"), 2, 2, &px);
    let clip = import_frames(dir.path(), "*.ppm").unwrap();
    assert_eq!(clip.dims(), (1, 2, 2, 3));
    assert_eq!(clip.data(), &px[..]);
}

#[test]
fn import_orders_naturally() {
    let dir = tempfile::tempdir().unwrap();
    for i in 1..=10u8 {
        image::GrayImage::from_pixel(3, 2, image::Luma([i]))
            .save(dir.path().join(format!("frame_{i}.png")))
            .unwrap();
    }
    fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
    let clip = import_frames(dir.path(), "frame_*.png").unwrap();
    assert_eq!(clip.dims(), (10, 2, 3, 1));
    let firsts: Vec<u8> = (0..10).map(|t| clip.get(t, 0, 0, 0)).collect();
    assert_eq!(firsts, (1..=10).collect::<Vec<u8>>());

    let out = dir.path().join("c.clip");
    let st = tempaug(&[
        "import",
        "--dir",
        s(dir.path()),
        "--pattern",
        "frame_*.png",
        "--out",
        s(&out),
    ]);
    assert_eq!(st.status.code(), Some(0));
    assert_eq!(read_clip(&out).unwrap(), clip);
}

#[test]
fn import_rejects_mixed_dims() {
    let dir = tempfile::tempdir().unwrap();
    image::RgbImage::new(160, 160)
        .save(dir.path().join("frame_1.png"))
        .unwrap();
    image::RgbImage::new(160, 158)
        .save(dir.path().join("frame_2.png"))
        .unwrap();
    match import_frames(dir.path(), "*.png") {
        Err(Error::Format(FormatError::InconsistentFrames { path, .. })) => {
            assert_eq!(path.file_name().unwrap(), "frame_2.png")
        }
        other => panic!("{other:?}"),
    }
    let empty = tempfile::tempdir().unwrap();
    assert!(matches!(
        import_frames(empty.path(), "*.png"),
        Err(Error::Format(FormatError::NoFrames { .. }))
    ));
    let st = tempaug(&[
        "import",
        "--dir",
        s(dir.path()),
        "--out",
        s(&dir.path().join("x.clip")),
    ]);
    assert_eq!(st.status.code(), Some(2));
}
