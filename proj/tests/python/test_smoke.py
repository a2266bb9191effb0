"""Smoke tests for the _guigan extension module and the CLI binary."""

import json
import math
import os
import subprocess

import pytest

import _guigan as g


def test_med_basic():
    assert g.med("abc", "abd") == 1
    assert g.med("", "abc") == 3
    assert g.med("kitten", "sitting") == 3
    assert g.med("same", "same") == 0


def test_homogeneity_bounds():
    # clusters perfectly aligned with classes -> 1
    assert g.homogeneity([0, 0, 1, 1], [0, 0, 1, 1]) == pytest.approx(1.0)
    # one cluster mixing both classes evenly -> 0
    assert g.homogeneity([0, 1, 0, 1], [0, 0, 0, 0]) == pytest.approx(0.0)
    h = g.homogeneity([0, 0, 1, 1], [0, 1, 1, 1])
    assert 0.0 < h < 1.0


def test_style_loss_value():
    emb = [[1.0, 0.0], [1.0, 0.1], [0.0, 1.0], [0.1, 1.0]]
    # a single app always scores 0
    assert g.style_loss_value([0, 0, 0, 0], emb) == pytest.approx(0.0)
    # two apps: bounded by [exp(-1), 1]
    loss = g.style_loss_value([0, 0, 1, 1], emb)
    assert math.exp(-1.0) <= loss <= 1.0


def test_structure_loss():
    # exact match against the real pool -> 0
    assert g.structure_loss("ab", ["ab", "cd"]) == pytest.approx(0.0)
    assert g.structure_loss("ab", ["cd"]) > 0.0


def test_fid_and_one_nna():
    rows = [[float(i), float(i % 3), 1.0] for i in range(12)]
    assert g.fid(rows, rows) == pytest.approx(0.0, abs=1e-8)
    shifted = [[r[0] + 1.0, r[1], r[2]] for r in rows]
    assert g.fid(rows, shifted) == pytest.approx(1.0, abs=1e-6)
    # duplicated sets: every point's nearest neighbor is its twin -> 0
    assert g.one_nna(rows, rows) == pytest.approx(0.0)
    far = [[r[0] + 1000.0, r[1], r[2]] for r in rows]
    assert g.one_nna(rows, far) == pytest.approx(1.0)


def test_errors_map_to_guigan_error():
    with pytest.raises(g.GuiganError):
        g.fid([[1.0, 2.0]], [[1.0, 2.0, 3.0]])
    with pytest.raises(g.GuiganError):
        g.one_nna([[1.0]] * 4, [[1.0]] * 5)
    with pytest.raises(g.GuiganError):
        g.homogeneity([0, 1], [0])


def test_end_to_end_pipeline(tmp_path):
    spec = g.SynthSpec()
    spec.seed = 3
    spec.n_apps = 2
    spec.screens_per_app = 3
    input_dir = str(tmp_path / "input")
    g.corpus_synth(spec, input_dir)
    assert os.path.isdir(input_dir)

    repo_dir = str(tmp_path / "repo")
    g.corpus_build(input_dir, repo_dir, g.SegmentationParams())
    assert os.path.isdir(repo_dir)

    style_cfg = tmp_path / "style.json"
    style_cfg.write_text(json.dumps({"epochs": 2, "pairs_per_epoch": 64}))
    ckpt = str(tmp_path / "siamese.ckpt")
    acc = g.style_train(repo_dir, str(style_cfg), 2, ckpt)
    assert 0.0 <= acc <= 1.0

    emb_path = str(tmp_path / "embeddings.json")
    g.style_embed(repo_dir, ckpt, emb_path)
    assert os.path.isfile(emb_path)

    gan_cfg = tmp_path / "gan.json"
    gan_cfg.write_text(
        json.dumps(
            {
                "max_len": 12,
                "batch": 8,
                "rollout_count": 2,
                "pretrain_epochs": 2,
                "rounds": 2,
                "disc_filters": 8,
            }
        )
    )
    run_dir = str(tmp_path / "run")
    g.gan_train(repo_dir, emb_path, str(gan_cfg), "full", 4, run_dir)
    assert os.path.isfile(os.path.join(run_dir, "config_resolved.json"))

    opts = g.GenerateOptions()
    opts.count = 4
    opts.render = True
    opts.seed = 9
    gen_dir = str(tmp_path / "generated")
    g.generate(run_dir, opts, gen_dir)
    pngs = [f for f in os.listdir(gen_dir) if f.endswith(".png")]
    assert len(pngs) == 4

    eval_opts = g.EvaluateOptions()
    eval_opts.seed = 6
    report_path = str(tmp_path / "report.json")
    report = g.evaluate_dirs(input_dir, gen_dir, ckpt, eval_opts, report_path)
    assert report.fid >= 0.0
    assert 0.0 <= report.one_nna <= 1.0
    assert report.real_count == report.generated_count == 4
    saved = json.loads(open(report_path).read())
    assert saved == json.loads(report.to_json())


def test_cli_exit_codes(tmp_path):
    cli = os.environ.get("GUIGAN_CLI")
    if not cli:
        pytest.skip("GUIGAN_CLI not set")
    out_dir = str(tmp_path / "synth")
    ok = subprocess.run(
        [cli, "corpus", "synth", "--seed", "1", "--apps", "2", "--screens", "2",
         "--output", out_dir],
        capture_output=True,
    )
    assert ok.returncode == 0, ok.stderr
    assert os.path.isdir(out_dir)

    usage = subprocess.run([cli, "corpus", "synth", "--bogus"], capture_output=True)
    assert usage.returncode == 1

    data_err = subprocess.run(
        [cli, "corpus", "build", "--input", str(tmp_path / "missing"),
         "--output", str(tmp_path / "repo")],
        capture_output=True,
    )
    assert data_err.returncode == 2
