import numpy as np

from antnet import (
    AcoParams,
    ExperimentReport,
    PhaseReport,
    RngSeed,
    GaussianBlobSpec,
    gen_dataset,
    run_experiment,
)
from antnet.plotting import render_report


def _report(repetitions=2):
    ds = gen_dataset(
        [
            GaussianBlobSpec(mu=(0.0, 0.0), sigma=(1.0, 1.0), n=4, label=0),
            GaussianBlobSpec(mu=(6.0, 6.0), sigma=(1.0, 1.0), n=4, label=1),
        ],
        RngSeed(0),
    )
    return run_experiment(
        ds, AcoParams(n_iters=5, seed=RngSeed(0)), repetitions=repetitions,
        dataset_name="tiny",
    )


def test_renders_svg_file(tmp_path):
    out = tmp_path / "plot.svg"
    render_report(_report(), out)
    text = out.read_text()
    assert text.lstrip().startswith("<?xml")
    assert "<svg" in text


def test_byte_identical_re_render(tmp_path):
    report = _report()
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    render_report(report, a)
    render_report(report, b)
    assert a.read_bytes() == b.read_bytes()


def test_single_class_single_phase(tmp_path):
    rep = PhaseReport.from_samples(1, "baseline", np.array([2.0, 2.5, 3.0]))
    report = ExperimentReport(
        dataset="one",
        params=AcoParams(),
        repetitions=3,
        target_class=0,
        normalize="none",
        class_reports=((rep,),),
    )
    out = tmp_path / "one.svg"
    render_report(report, out)
    assert out.stat().st_size > 0
