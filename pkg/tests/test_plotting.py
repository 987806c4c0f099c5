from matplotlib.figure import Figure

from helpers import caterpillar4, hourglass
from symfitch import explain, recognize
from symfitch.plotting import draw_tree, report_figure, save_figure


def test_report_figure_for_fitch_map_has_tree_panel():
    e = explain(caterpillar4(inner={"1"}, outer={"2"}))
    fig = report_figure(e, recognize(e), "cat")
    assert isinstance(fig, Figure)
    assert len(fig.axes) == len(e.colors) + 1
    assert "fitch" in fig._suptitle.get_text()


def test_report_figure_for_rejection_names_reason():
    hg = hourglass()
    fig = report_figure(hg, recognize(hg), "hg")
    assert len(fig.axes) == 2
    assert "ab|cd" in fig._suptitle.get_text()


def test_empty_edges_are_dashed():
    fig = Figure()
    ax = fig.add_subplot()
    draw_tree(caterpillar4(), ax)
    styles = [line.get_linestyle() for line in ax.lines if len(line.get_xdata()) == 2]
    assert styles.count("--") == 4 and styles.count("-") == 1
    assert [t.get_text() for t in ax.get_legend().get_texts()] == ["{}", "{m}"]


def test_save_figure_writes_png(tmp_path):
    path = tmp_path / "f.png"
    save_figure(report_figure(hourglass()), str(path))
    assert path.read_bytes()[:4] == b"\x89PNG"
