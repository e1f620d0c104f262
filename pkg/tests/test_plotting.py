from linkrank.plotting import plot_convergence, plot_spectrum
from linkrank.power_engine import convergence_profile, power_iterate
from linkrank.spectral_tools import spectrum_report

PNG = b"\x89PNG\r\n\x1a\n"


def test_convergence_figure(eight, tmp_path):
    trace = power_iterate(eight, "e1")
    rows = convergence_profile(trace, trace.final, 0.87)
    path = plot_convergence(rows, trace.residuals, 0.87, tmp_path / "sub" / "c.png", title="x")
    assert path.read_bytes()[:8] == PNG


def test_convergence_figure_without_profile(tmp_path):
    path = plot_convergence([], [0.5, 0.25, 0.0], None, tmp_path / "c.png")
    assert path.exists()


def test_spectrum_figure(four, tmp_path):
    path = plot_spectrum(spectrum_report(four), tmp_path / "s.png")
    assert path.read_bytes()[:8] == PNG


def test_spectrum_figure_without_roots(eight, tmp_path):
    rep = spectrum_report(eight, cap=4)
    assert plot_spectrum(rep, tmp_path / "s.png").exists()


def test_figures_are_byte_stable(four, tmp_path):
    rep = spectrum_report(four)
    a = plot_spectrum(rep, tmp_path / "a.png").read_bytes()
    b = plot_spectrum(rep, tmp_path / "b.png").read_bytes()
    assert a == b
