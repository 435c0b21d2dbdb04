import json

import pytest

from fixerbreaker.cli import INPUT_ERROR, NEGATIVE, OK, dump_instance, main, parse_instance, InputError


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return str(p)


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


WIN = {"pot": ["a", "b", "c"], "sets": [["a", "b"], ["a", "b"], ["a", "b"]], "t": 1}
LOSE = {"pot": ["a", "b"], "sets": [["a"], ["a"]], "t": 1}


class TestParse:
    def test_round_trip(self):
        doc = {"pot": ["p", "q", "r", "s"], "sets": [["q", "p"], ["r"]], "t": 2, "eta": [2, 1]}
        s = parse_instance(doc)
        back = dump_instance(s)
        assert back == {"pot": ["p", "q", "r", "s"], "sets": [["p", "q"], ["r"]], "t": 2, "eta": [2, 1]}
        assert dump_instance(parse_instance(back)) == back

    @pytest.mark.parametrize("doc,msg", [
        ({"sets": [], "t": 1}, "missing key 'pot'"),
        ({"pot": ["a"], "sets": [["z"]], "t": 1}, "sets[0][0]: element 'z' is not in the pot"),
        ({"pot": ["a"], "sets": [["a"]], "t": "1"}, "'t' has the wrong type"),
        ({"pot": ["a"], "sets": [["a"]], "t": 0}, "t must be >= 1"),
        ({"pot": ["a"], "sets": [["a"], ["a"]], "t": 1}, "below the total demand"),
        ({"pot": ["a", "a"], "sets": [["a"]], "t": 1}, "duplicate"),
    ])
    def test_errors(self, doc, msg):
        with pytest.raises(InputError) as e:
            parse_instance(doc)
        assert msg in str(e.value)

    def test_t_override(self):
        assert parse_instance({"pot": ["a"], "sets": [["a"]]}, t=3).t == 3


def test_check(tmp_path, capsys):
    code, doc = run(capsys, ["check", write(tmp_path, "w.json", WIN)])
    assert (code, doc) == (OK, {"fixer_wins": True, "witness": None})
    code, doc = run(capsys, ["check", write(tmp_path, "l.json", LOSE)])
    assert (code, doc) == (NEGATIVE, {"fixer_wins": False, "witness": [0, 1]})


def test_check_t_override(tmp_path, capsys):
    # {a},{a},{a} with t = 1 loses; raising t does not rescue a single element
    three = {"pot": ["a", "b", "c"], "sets": [["a"], ["a"], ["a"]], "t": 1}
    path = write(tmp_path, "x.json", three)
    assert run(capsys, ["check", path])[0] == NEGATIVE
    assert run(capsys, ["check", "--t", "2", path])[0] == NEGATIVE


def test_trace_fixer(tmp_path, capsys):
    code, doc = run(capsys, ["trace", write(tmp_path, "w.json", WIN)])
    assert code == OK and doc["winner"] == "Fixer" and doc["forfeit"] is None
    assert doc["rounds"] == len(doc["trace"]) >= 1
    reps = [r[0] for r in doc["transversal"].values()]
    final = doc["trace"][-1]["family"]
    assert len(set(reps)) == 3
    assert all(reps[i] in final[i] for i in range(3))


def test_trace_breaker(tmp_path, capsys):
    code, doc = run(capsys, ["trace", "--round-limit", "7", write(tmp_path, "l.json", LOSE)])
    assert code == NEGATIVE and doc["winner"] == "Breaker"
    assert doc["rounds"] == 7 and len(doc["trace"]) == 7 and doc["forfeit"] is None
    for entry in doc["trace"]:
        assert set(entry) == {"round", "fixer", "breaker", "family"}


def test_oracle(tmp_path, capsys):
    code, doc = run(capsys, ["oracle", write(tmp_path, "w.json", WIN)])
    assert code == OK
    assert doc["winner"] == "Fixer" and doc["rounds"] == 1
    assert doc["first_move"] == {"set": 0, "insert": "c", "remove": "a"}
    assert doc["states_explored"] >= 1
    code, doc = run(capsys, ["oracle", write(tmp_path, "l.json", LOSE)])
    assert code == NEGATIVE and doc["winner"] == "Breaker" and doc["first_move"] is None


def test_oracle_guard(tmp_path, capsys):
    big = {"pot": list("abcdefghij"), "sets": [list("abcde")] * 4, "t": 1}
    code = main(["oracle", write(tmp_path, "b.json", big)])
    captured = capsys.readouterr()
    assert code == INPUT_ERROR and "error" in json.loads(captured.out)
    assert captured.err


def test_color_chi_fan(tmp_path, capsys):
    c3 = write(tmp_path, "c3.json", {"n": 3, "edges": [[0, 1], [1, 2], [2, 0]]})
    code, doc = run(capsys, ["color", c3])
    assert code == OK and doc["k"] == 3 and sorted(doc["colors"]) == [1, 2, 3]
    assert run(capsys, ["chi", c3]) == (OK, 3)
    code, doc = run(capsys, ["fan", c3, "0", "1"])
    assert code == OK and doc["applicable"] and doc["sum"] == 2 and 1 in doc["X"] and doc["chi"] == 3
    path = write(tmp_path, "p.json", {"n": 3, "edges": [[0, 1], [1, 2]]})
    code, doc = run(capsys, ["fan", path, "0", "1"])
    assert code == NEGATIVE and doc["applicable"] is False


def test_bad_inputs(tmp_path, capsys):
    assert main(["check", write(tmp_path, "m.json", {"sets": [], "t": 1})]) == INPUT_ERROR
    err = capsys.readouterr().err
    assert "missing key 'pot'" in err
    assert main(["check", write(tmp_path, "j.json", "{not json")]) == INPUT_ERROR
    assert main(["check", str(tmp_path / "absent.json")]) == INPUT_ERROR
    assert main(["color", write(tmp_path, "g.json", {"n": 2, "edges": [[0, 0]]})]) == INPUT_ERROR
    capsys.readouterr()


def test_batch_and_output(tmp_path, capsys):
    w, l = write(tmp_path, "w.json", WIN), write(tmp_path, "l.json", LOSE)
    out = tmp_path / "out.json"
    code = main(["check", "--batch", "--output", str(out), w, l])
    assert code == NEGATIVE
    assert capsys.readouterr().out == ""
    docs = json.loads(out.read_text())
    assert [d["fixer_wins"] for d in docs] == [True, False]


def test_multiple_inputs_need_batch(tmp_path):
    w = write(tmp_path, "w.json", WIN)
    with pytest.raises(SystemExit):
        main(["check", w, w])


@pytest.mark.parametrize("cmd", ["check", "trace", "oracle"])
def test_deterministic(tmp_path, cmd):
    inp = write(tmp_path, "i.json", {"pot": list("abcde"), "sets": [["a", "b"]] * 3 + [["c"]], "t": 1})
    outs = []
    for k in range(2):
        o = tmp_path / f"o{k}.json"
        main([cmd, "--output", str(o), inp])
        outs.append(o.read_bytes())
    assert outs[0] == outs[1]
