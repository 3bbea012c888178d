from nsbox.boxes import BoxShape
from nsbox.cli import main
from nsbox.families import svetlichny_box, two_way_vertex, uniform, xyplusz
from nsbox.fileio import dumps_functional, load_box, loads_box, save_box
from nsbox.locality import chsh_functional


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_make_then_chsh(tmp_path, capsys):
    box = tmp_path / "pr.box"
    code, out, _ = run(capsys, "make", "pr", "-o", str(box))
    assert code == 0
    code, out, _ = run(capsys, "bell", str(box), "--chsh", "0", "0", "0")
    assert code == 0
    assert out == "4/1\n"


def test_dim(capsys):
    code, out, _ = run(capsys, "dim", "2,2/2,2")
    assert code == 0
    assert out == "8\n"


def test_preset_wire_expect(tmp_path, capsys):
    wiring = tmp_path / "p5.json"
    target = tmp_path / "xyplusz.box"
    assert run(capsys, "preset", "P5", "-o", str(wiring))[0] == 0
    assert run(capsys, "make", "xyplusz", "-o", str(target))[0] == 0
    code, out, _ = run(capsys, "wire", str(wiring), "--expect", str(target))
    assert code == 0
    assert out == "MATCH\n"


def test_wire_mismatch(tmp_path, capsys):
    wiring = tmp_path / "p6.json"
    target = tmp_path / "xyplusz.box"
    run(capsys, "preset", "P6", "-o", str(wiring))
    run(capsys, "make", "xyplusz", "-o", str(target))
    code, out, _ = run(capsys, "wire", str(wiring), "--expect", str(target))
    assert code == 1
    assert out == "MISMATCH\n"


def test_wire_prints_or_saves_the_box(tmp_path, capsys):
    wiring = tmp_path / "p1.json"
    run(capsys, "preset", "P1", "2", "2", "-o", str(wiring))
    code, out, _ = run(capsys, "wire", str(wiring))
    assert code == 0
    assert out.startswith("shape 4,4/4,4\n")
    assert loads_box(out).shape.outputs == ((4, 4), (4, 4))
    saved = tmp_path / "result.box"
    code, out, _ = run(capsys, "wire", str(wiring), "-o", str(saved))
    assert code == 0
    assert out == ""
    load_box(saved).require_valid()


def test_validate_verdicts(tmp_path, capsys):
    good = tmp_path / "good.box"
    save_box(xyplusz(), good)
    code, out, _ = run(capsys, "validate", str(good))
    assert code == 0
    assert out == "VALID\n"

    bad = tmp_path / "bad.box"
    bad.write_text("shape 2,2/2,2\ntable\n1/1 0/1 0/1 0/1\n"
                   "1/1 0/1 0/1 0/1\n0/1 1/1 0/1 0/1\n1/1 0/1 0/1 0/1\n")
    code, out, _ = run(capsys, "validate", str(bad))
    assert code == 1
    assert out.startswith("INVALID\n")
    assert len(out.splitlines()) > 1

    broken = tmp_path / "broken.box"
    broken.write_text("not a box\n")
    code, _, err = run(capsys, "validate", str(broken))
    assert code == 2
    assert err.startswith("error:")


def test_make_errors(tmp_path, capsys):
    out_path = str(tmp_path / "x.box")
    code, _, err = run(capsys, "make", "nosuch", "-o", out_path)
    assert code == 2
    assert "error:" in err
    code, _, err = run(capsys, "make", "pr", "9", "9", "9", "9", "-o", out_path)
    assert code == 2
    assert "cannot build family" in err


def test_vertices_and_classify(tmp_path, capsys):
    outdir = tmp_path / "verts"
    code, out, _ = run(capsys, "vertices", "2,2/2,2", "-o", str(outdir))
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "vertices 24"
    assert lines[1] == "classes 2"
    assert lines[2] == "0 vertex_0000.box 16"
    assert lines[3] == "1 vertex_0008.box 8"
    assert len(list(outdir.glob("vertex_*.box"))) == 24
    assert (outdir / "classes.txt").read_text() == (
        "0 vertex_0000.box 16\n1 vertex_0008.box 8\n")

    code, out, _ = run(capsys, "classify", str(outdir))
    assert code == 0
    assert out.splitlines() == ["0 vertex_0000.box 16",
                                "1 vertex_0008.box 8"]


def test_classify_needs_boxes(tmp_path, capsys):
    code, _, err = run(capsys, "classify", str(tmp_path))
    assert code == 2
    assert "no .box files" in err


def test_bell_svetlichny_and_functional(tmp_path, capsys):
    tri = tmp_path / "svet.box"
    save_box(svetlichny_box(), tri)
    code, out, _ = run(capsys, "bell", str(tri), "--svetlichny")
    assert code == 0
    assert out == "8/1\n"

    f = tmp_path / "chsh.bell"
    f.write_text(dumps_functional(chsh_functional()))
    pr_path = tmp_path / "pr.box"
    run(capsys, "make", "pr", "-o", str(pr_path))
    code, out, _ = run(capsys, "bell", str(pr_path), "--functional", str(f))
    assert code == 0
    assert out == "4/1\n"


def test_local_verdicts(tmp_path, capsys):
    pr_path = tmp_path / "pr.box"
    run(capsys, "make", "pr", "-o", str(pr_path))
    code, out, _ = run(capsys, "local", str(pr_path))
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "NONLOCAL"
    assert lines[1] == "value 4/1"
    assert lines[2] == "threshold 2/1"
    assert lines[3] == "coefficients"
    assert len(lines) == 8

    code, _, _ = run(capsys, "local", str(pr_path), "--assert-local")
    assert code == 1

    det = tmp_path / "det.box"
    run(capsys, "make", "localdet", "1", "0", "0", "1", "-o", str(det))
    code, out, _ = run(capsys, "local", str(det))
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "LOCAL"
    assert len(lines) == 2
    weight, blocks = lines[1].split(" ", 1)
    assert weight == "1/1"
    assert len(blocks.split()) == 4


def test_local2_verdict(tmp_path, capsys):
    tw = tmp_path / "tw.box"
    save_box(two_way_vertex(), tw)
    code, out, _ = run(capsys, "local2", str(tw))
    assert code == 0
    assert out.splitlines()[0] == "LOCAL"


def test_protocol3_error(capsys):
    code, out, _ = run(capsys, "protocol3-error", "2", "3", "2")
    assert code == 0
    assert out == "1/4\n"


def test_mincomm(tmp_path, capsys):
    pr_path = tmp_path / "pr.box"
    run(capsys, "make", "pr", "-o", str(pr_path))
    code, out, _ = run(capsys, "mincomm", str(pr_path), "--max-bits", "2")
    assert code == 0
    assert out == "1\n"
    code, out, _ = run(capsys, "mincomm", str(pr_path), "--max-bits", "0")
    assert code == 1
    assert out == "NONE\n"


def test_extend(tmp_path, capsys):
    pr_path = tmp_path / "pr.box"
    run(capsys, "make", "pr", "-o", str(pr_path))
    code, out, _ = run(capsys, "extend", str(pr_path),
                       "--env-inputs", "1", "--env-outputs", "2")
    assert code == 0
    assert out == "FACTORIZES\n"

    u_path = tmp_path / "uniform.box"
    save_box(uniform(BoxShape.homogeneous(2, 2, 2)), u_path)
    witness = tmp_path / "w.box"
    code, out, _ = run(capsys, "extend", str(u_path), "--env-inputs", "1",
                       "--env-outputs", "2", "-o", str(witness))
    assert code == 1
    assert out == f"{witness}\n"
    load_box(witness).require_valid()


def test_missing_file_is_a_usage_error(tmp_path, capsys):
    code, _, err = run(capsys, "validate", str(tmp_path / "absent.box"))
    assert code == 2
    assert err.startswith("error:")


def test_unknown_preset(tmp_path, capsys):
    code, _, err = run(capsys, "preset", "P9", "-o", str(tmp_path / "x.json"))
    assert code == 2
    assert "unknown preset" in err
