import numpy as np
import pytest

from circleq.cli import OUTDIR_ENV, RunConfig, main, parse_config_text

SCHEMAS = {
    "fiducial_profile.csv": "# schema: circleq/fiducial-profile v1",
    "fiducial_moments.csv": "# schema: circleq/fiducial-moments v1",
    "fiducial_attenuation.csv": "# schema: circleq/fiducial-attenuation v1",
    "fiducial_coefficients.csv": "# schema: circleq/fiducial-coefficients v1",
    "unity_defects.csv": "# schema: circleq/unity-defects v1",
    "hamiltonian_grid.csv": "# schema: circleq/hamiltonian-grid v1",
    "compare_summary.csv": "# schema: circleq/compare-summary v1",
}


def read_table(path):
    # two comment lines (schema, timestamp) precede the column header
    return np.genfromtxt(path, delimiter=",", names=True, skip_header=2)


def stable_lines(path):
    return [
        line
        for line in path.read_text().splitlines()
        if not line.startswith("# generated")
    ]


def run(tmp_path, command, *settings):
    outdir = tmp_path / "out"
    args = [command, "--set", f"output.dir = {outdir}"]
    for item in settings:
        args += ["--set", item]
    code = main(args)
    return code, outdir


def test_config_grammar_and_unknown_key():
    entries = parse_config_text("model.hbar = 2.0\n# comment\n\nrun.steps=5")
    assert entries == {"model.hbar": "2.0", "run.steps": "5"}
    with pytest.raises(Exception) as info:
        parse_config_text("model.mass = 1.0")
    assert "model.mass" in str(info.value)


def test_config_file_loading(tmp_path):
    cfgfile = tmp_path / "run.cfg"
    cfgfile.write_text("model.r = 2.5\nrun.steps = 17  # inline comment\n")
    cfg = RunConfig.load(str(cfgfile), overrides=["run.steps = 19"])
    assert cfg.spec().r == 2.5
    assert cfg._int("run.steps") == 19


def test_malformed_value_exits_one(tmp_path, capsys):
    code, _ = run(tmp_path, "fiducial", "model.r = banana")
    assert code == 1
    assert "model.r" in capsys.readouterr().err


def test_unknown_key_exits_one(tmp_path, capsys):
    code, _ = run(tmp_path, "fiducial", "model.bogus = 1")
    assert code == 1
    assert "model.bogus" in capsys.readouterr().err


def test_unwritable_output_exits_three(tmp_path):
    blocker = tmp_path / "blocked"
    blocker.write_text("not a directory")
    code = main(["fiducial", "--set", f"output.dir = {blocker}"])
    assert code == 3


def test_fiducial_outputs_and_moments_row(tmp_path):
    code, outdir = run(tmp_path, "fiducial", "model.r = 2.0", "model.alpha = 0.3")
    assert code == 0
    for name in ("fiducial_profile.csv", "fiducial_moments.csv",
                 "fiducial_attenuation.csv", "fiducial_coefficients.csv"):
        first = (outdir / name).read_text().splitlines()[0]
        assert first == SCHEMAS[name]
    row = read_table(outdir / "fiducial_moments.csv")
    assert abs(float(row["mean_q"])) < 1e-9
    assert float(row["mean_p"]) == pytest.approx(0.3, abs=1e-9)
    assert int(row["envelope_ok"]) == 1
    profile = read_table(outdir / "fiducial_profile.csv")
    assert np.all(profile["density"] <= profile["upper_envelope"] * (1 + 1e-12))
    assert np.all(profile["density"] >= profile["lower_envelope"] * (1 - 1e-12))


def test_fiducial_rerun_is_bit_identical(tmp_path):
    _, out1 = run(tmp_path / "a", "fiducial", "run.seed = 3")
    _, out2 = run(tmp_path / "b", "fiducial", "run.seed = 3")
    for name in ("fiducial_profile.csv", "fiducial_moments.csv",
                 "fiducial_attenuation.csv", "fiducial_coefficients.csv"):
        assert stable_lines(out1 / name) == stable_lines(out2 / name)


def test_numbers_round_trip_at_17_digits(tmp_path):
    _, outdir = run(tmp_path, "fiducial")
    coeffs = read_table(outdir / "fiducial_coefficients.csv")
    from circleq.fiducial import FiducialSpec, momentum_coefficients, default_basis

    spec = FiducialSpec(r=1.0)
    exact = momentum_coefficients(spec, default_basis(spec)).coeffs.real
    assert np.array_equal(coeffs["coefficient"], exact)
    # default model is centered at zero twist
    row = read_table(outdir / "fiducial_moments.csv")
    assert abs(float(row["mean_q"])) < 1e-9 and abs(float(row["mean_p"])) < 1e-9


def test_unity_ladder_csv(tmp_path):
    code, outdir = run(tmp_path, "unity", "model.alpha = 0.25")
    assert code == 0
    table = read_table(outdir / "unity_defects.csv")
    interior = table["interior_diag_defect"]
    assert np.all(np.diff(interior) < 0.0)
    assert interior[-1] <= 1e-3
    assert np.all(table["offdiag_defect"] <= 1e-10)
    assert (outdir / "unity_defects.csv").read_text().splitlines()[0] == SCHEMAS["unity_defects.csv"]


def test_unity_single_cutoff_same_schema(tmp_path):
    _, outdir = run(tmp_path, "unity", "run.p_cutoff_factors = 40")
    lines = stable_lines(outdir / "unity_defects.csv")
    assert lines[0] == SCHEMAS["unity_defects.csv"]
    assert lines[1].startswith("p_cutoff,")
    assert len(lines) == 3  # schema + header + one row


def test_hamiltonian_grid_dump(tmp_path):
    code, outdir = run(
        tmp_path, "hamiltonian",
        "model.potential.a = 1.0", "model.r = 50.0", "run.p_grid = -2, 2, 9",
    )
    assert code == 0
    table = read_table(outdir / "hamiltonian_grid.csv")
    # after the canonical shift the residual is the attenuation gap only
    meta = read_table(outdir / "hamiltonian_meta.csv")
    bound = (1.0 - float(meta["rho_1"])) + 1e-12
    assert np.all(np.abs(table["residual"]) <= bound)
    assert (outdir / "hamiltonian_grid.csv").read_text().splitlines()[0] == SCHEMAS["hamiltonian_grid.csv"]


def test_evolve_kinds(tmp_path):
    code, outdir = run(
        tmp_path, "evolve",
        "model.potential.a = 1.0", "run.kind = classical",
        "run.q0 = 2.74", "run.p0 = 0.0", "run.steps = 200",
    )
    assert code == 0
    table = read_table(outdir / "trajectory_classical.csv")
    assert len(table) == 201
    assert np.max(np.abs(table["energy"] - table["energy"][0])) < 1e-5

    code, outdir_q = run(
        tmp_path / "q", "evolve",
        "run.kind = quantum", "model.r = 4.0", "run.steps = 50",
    )
    assert code == 0
    quantum = read_table(outdir_q / "trajectory_quantum.csv")
    assert np.max(np.abs(quantum["norm"] - 1.0)) < 1e-9


def test_compare_free_momentum_columns(tmp_path):
    code, outdir = run(
        tmp_path, "compare",
        "model.r = 8.0", "model.alpha = 0.25",
        "run.p0 = 2.3", "run.q0 = -0.5",
        "run.total_time = 0.5", "run.dt = 0.01",
    )
    assert code == 0
    classical = read_table(outdir / "compare_classical.csv")
    enhanced = read_table(outdir / "compare_enhanced.csv")
    quantum = read_table(outdir / "compare_quantum.csv")
    # identical after the twist shift
    assert np.max(np.abs(classical["p"] - enhanced["p"])) < 1e-12
    assert np.max(np.abs(quantum["mean_p"] - (enhanced["p"] + 0.25))) < 1e-9
    summary = read_table(outdir / "compare_summary.csv")
    assert float(summary["max_momentum_deviation"]) < 1e-9


def test_compare_deviation_decreases_with_localization(tmp_path):
    # sharper states (growing r/hbar at fixed r, so both spreads shrink)
    # track the classical phase longer
    summaries = []
    for ratio in (2, 10, 50):
        _, outdir = run(
            tmp_path / f"z{ratio}", "compare",
            f"model.hbar = {1.0 / ratio}", "model.r = 1.0",
            "model.alpha = 0.25", "model.potential.a = 1.0",
            "run.q0 = 2.3416", "run.p0 = 0.0",
            "run.total_time = 5.2", "run.dt = 0.01",
        )
        summaries.append(float(read_table(outdir / "compare_summary.csv")["max_phase_deviation"]))
    assert summaries[0] > summaries[1] > summaries[2]


def test_compare_alpha_sweep_with_compensation(tmp_path):
    # compensated initial momenta: the enhanced columns coincide after the
    # twist shift, whatever alpha
    tracks = []
    for alpha in (0.0, 0.5):
        _, outdir = run(
            tmp_path / f"a{alpha}", "compare",
            "model.r = 4.0", f"model.alpha = {alpha}",
            "model.potential.a = 1.0",
            "run.q0 = 0.5", f"run.p0 = {0.8 - alpha}",
            "run.total_time = 1.0", "run.dt = 0.01",
        )
        table = read_table(outdir / "compare_enhanced.csv")
        tracks.append((table["q_unwrapped"], table["p"] + alpha))
    assert np.max(np.abs(tracks[0][0] - tracks[1][0])) < 1e-10
    assert np.max(np.abs(tracks[0][1] - tracks[1][1])) < 1e-10


def test_unrepresentable_state_exits_two(tmp_path, capsys):
    # a weakly concentrated state with a non-integer boost leaks spectral
    # weight past any reasonable lattice edge
    code, _ = run(
        tmp_path, "compare",
        "model.r = 1.0", "run.p0 = 0.3", "run.total_time = 0.1",
    )
    assert code == 2
    assert "numerical contract" in capsys.readouterr().err


def test_selftest_failure_exits_two(monkeypatch, capsys):
    import circleq.cli as climod

    monkeypatch.setattr(
        climod, "_selftest_checks", lambda cfg: [("doomed", lambda: False)]
    )
    assert main(["selftest"]) == 2
    captured = capsys.readouterr()
    assert "FAIL doomed" in captured.out
    assert "doomed" in captured.err


def test_environment_variable_overrides_outdir(tmp_path, monkeypatch):
    target = tmp_path / "env-out"
    monkeypatch.setenv(OUTDIR_ENV, str(target))
    code = main(["fiducial", "--set", "output.dir = should-not-be-used"])
    assert code == 0
    assert (target / "fiducial_moments.csv").exists()
    assert not (tmp_path / "should-not-be-used").exists()


def test_selftest_passes(tmp_path, capsys):
    assert main(["selftest"]) == 0
    out = capsys.readouterr().out
    assert out.count("ok  ") >= 7 and "FAIL" not in out


def test_plot_scripts_compile(tmp_path):
    for command, script in (
        ("fiducial", "plot_fiducial.py"),
        ("unity", "plot_unity.py"),
        ("compare", "plot_compare.py"),
    ):
        settings = []
        if command == "compare":
            settings = ["model.r = 4.0", "run.total_time = 0.1", "run.dt = 0.01"]
        _, outdir = run(tmp_path / command, command, *settings)
        source = (outdir / script).read_text()
        compile(source, script, "exec")
