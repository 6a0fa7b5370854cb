import io

import pytest

from fixtureutil import FixtureWriter, make_comment, make_issue, write_fixture

from issuesift.classifier import default_taxonomy
from issuesift.cli import interactive_session, main, parse_args
from issuesift.errors import Aborted, UsageError
from issuesift.github_client import GITHUB_API


class TestParseArgs:
    def test_defaults(self):
        config = parse_args(["--query", "tf.function"], {})
        assert config.spec.query == "tf.function"
        assert config.spec.limit == 100
        assert config.spec.sort == "best-match"
        assert config.spec.order == "desc"
        assert config.spec.strict_match is True
        assert config.spec.min_comments == 1
        assert config.output_path == "results.csv"
        assert config.omitted_path == "omitted.csv"
        assert config.token is None and config.token_source == "none"
        assert config.interactive is False
        assert config.include_confidence is False

    def test_limit_cap_accepted(self):
        config = parse_args(["--query", "tf.function", "--limit", "1000"], {})
        assert config.spec.limit == 1000

    def test_limit_over_cap_names_flag(self):
        with pytest.raises(UsageError) as excinfo:
            parse_args(["--query", "x", "--limit", "1001"], {})
        assert "--limit" in str(excinfo.value)

    def test_query_or_interactive_required(self):
        with pytest.raises(UsageError):
            parse_args([], {})

    def test_query_and_interactive_conflict(self):
        with pytest.raises(UsageError):
            parse_args(["--query", "x", "--interactive"], {})

    def test_same_output_paths_rejected(self):
        with pytest.raises(UsageError):
            parse_args(["--query", "x", "--output", "a.csv", "--omitted-output", "a.csv"], {})

    def test_unknown_flag(self):
        with pytest.raises(UsageError):
            parse_args(["--query", "x", "--frobnicate"], {})

    def test_bad_sort_value(self):
        with pytest.raises(UsageError):
            parse_args(["--query", "x", "--sort", "stars"], {})

    def test_token_env_fallback(self):
        config = parse_args(["--query", "x"], {"GITHUB_TOKEN": "env-token"})
        assert config.token == "env-token"
        assert config.token_source == "environment"

    def test_token_flag_wins_over_env(self):
        config = parse_args(["--query", "x", "--token", "flag-token"],
                            {"GITHUB_TOKEN": "env-token"})
        assert config.token == "flag-token"
        assert config.token_source == "flag"

    def test_category_flags_repeatable(self):
        config = parse_args(
            ["--query", "x",
             "--omit-category", "Usage", "--omit-category", "Social Discussion",
             "--require-category", "Bug Reproduction",
             "--forbid-category", "Solution Discussion"],
            {},
        )
        assert config.spec.omit_categories == {"Usage", "Social Discussion"}
        assert config.spec.require_categories == {"Bug Reproduction"}
        assert config.spec.forbid_categories == {"Solution Discussion"}

    def test_require_forbid_overlap_rejected(self):
        with pytest.raises(UsageError):
            parse_args(["--query", "x", "--require-category", "Usage",
                        "--forbid-category", "Usage"], {})

    def test_no_strict_match_and_scope(self):
        config = parse_args(["--query", "x", "--no-strict-match",
                             "--strict-scope", "comment"], {})
        assert config.spec.strict_match is False
        assert config.spec.strict_scope == "comment"

    def test_purity(self):
        argv = ["--query", "x", "--limit", "5"]
        env = {"GITHUB_TOKEN": "t"}
        assert parse_args(argv, env) == parse_args(argv, env)
        assert argv == ["--query", "x", "--limit", "5"]


def scripted(answers):
    return io.StringIO("".join(a + "\n" for a in answers))


class TestInteractiveSession:
    def test_defaults_accepted(self):
        stdin = scripted(["tf.function", "", "", "", "", "", "", "y"])
        spec = interactive_session(stdin, io.StringIO(), default_taxonomy())
        assert spec.query == "tf.function"
        assert spec.limit == 100
        assert spec.sort == "best-match"
        assert spec.order == "desc"
        assert spec.omit_categories == frozenset()

    def test_invalid_limit_reprompts(self):
        stdout = io.StringIO()
        stdin = scripted(["q", "0", "10", "", "", "", "", "", "y"])
        spec = interactive_session(stdin, stdout, default_taxonomy())
        assert spec.limit == 10
        assert "between 1 and 1000" in stdout.getvalue()

    def test_cancel_at_confirmation(self):
        stdin = scripted(["q", "", "", "", "", "", "", "n"])
        with pytest.raises(Aborted):
            interactive_session(stdin, io.StringIO(), default_taxonomy())

    def test_end_of_input_aborts(self):
        with pytest.raises(Aborted):
            interactive_session(io.StringIO(""), io.StringIO(), default_taxonomy())

    def test_category_selection_by_number(self):
        taxonomy = default_taxonomy()
        stdin = scripted(["q", "", "", "", "8", "", "", "y"])
        spec = interactive_session(stdin, io.StringIO(), taxonomy)
        assert spec.omit_categories == {taxonomy.categories[7]}

    def test_sort_menu_by_number(self):
        stdin = scripted(["q", "", "2", "asc", "", "", "", "y"])
        spec = interactive_session(stdin, io.StringIO(), default_taxonomy())
        assert spec.sort == "comments"
        assert spec.order == "asc"

    def test_bad_category_reprompts(self):
        stdout = io.StringIO()
        stdin = scripted(["q", "", "", "", "not-a-category", "", "", "", "y"])
        spec = interactive_session(stdin, stdout, default_taxonomy())
        assert spec.omit_categories == frozenset()
        assert "not a category" in stdout.getvalue()


class TestMain:
    def run_main(self, argv, env=None):
        out, err = io.StringIO(), io.StringIO()
        code = main(argv, env or {}, stdin=io.StringIO(), stdout=out, stderr=err)
        return code, out.getvalue(), err.getvalue()

    def test_fixture_run_success(self, small_fixture_dir, tmp_path):
        results = tmp_path / "results.csv"
        omitted = tmp_path / "omitted.csv"
        code, out, err = self.run_main([
            "--query", "tf.function", "--fixtures", str(small_fixture_dir),
            "--output", str(results), "--omitted-output", str(omitted),
        ])
        assert code == 0, err
        assert results.exists() and omitted.exists()
        assert "issues searched" in out
        assert err == ""

    def test_usage_error_exit_1(self):
        code, _, err = self.run_main(["--limit", "5"])
        assert code == 1
        assert "usage error" in err

    def test_query_rejection_exit_2(self, tmp_path):
        writer = FixtureWriter(tmp_path / "fx")
        writer.add(f"{GITHUB_API}/search/issues?q=bad&per_page=100&page=1",
                   {"message": "Validation Failed"}, status=422)
        writer.write_manifest()
        code, _, err = self.run_main(["--query", "bad", "--fixtures", str(tmp_path / "fx")])
        assert code == 2
        assert "rejected" in err

    def test_unwritable_output_exit_3(self, small_fixture_dir, tmp_path):
        blocker = tmp_path / "results.csv"
        blocker.mkdir()
        code, _, err = self.run_main([
            "--query", "tf.function", "--fixtures", str(small_fixture_dir),
            "--output", str(blocker), "--omitted-output", str(tmp_path / "omitted.csv"),
        ])
        assert code == 3
        assert "error" in err

    def test_missing_fixture_dir_exit_3(self, tmp_path):
        code, _, err = self.run_main(
            ["--query", "x", "--fixtures", str(tmp_path / "missing")])
        assert code == 3

    def test_unknown_category_flag_exit_1(self, small_fixture_dir, tmp_path):
        code, _, err = self.run_main([
            "--query", "tf.function", "--fixtures", str(small_fixture_dir),
            "--omit-category", "Not A Real Category",
            "--output", str(tmp_path / "r.csv"), "--omitted-output", str(tmp_path / "o.csv"),
        ])
        assert code == 1
        assert "Not A Real Category" in err

    def test_bad_model_file_exit_3(self, small_fixture_dir, tmp_path):
        bad_model = tmp_path / "model.json"
        bad_model.write_text("{}", encoding="utf-8")
        code, _, err = self.run_main([
            "--query", "tf.function", "--fixtures", str(small_fixture_dir),
            "--model", str(bad_model),
            "--output", str(tmp_path / "r.csv"), "--omitted-output", str(tmp_path / "o.csv"),
        ])
        assert code == 3

    def test_interactive_flow_end_to_end(self, small_fixture_dir, tmp_path):
        stdin = io.StringIO("".join(a + "\n" for a in
                                    ["tf.function", "", "", "", "", "", "", "y"]))
        out, err = io.StringIO(), io.StringIO()
        code = main([
            "--interactive", "--fixtures", str(small_fixture_dir),
            "--output", str(tmp_path / "r.csv"), "--omitted-output", str(tmp_path / "o.csv"),
        ], {}, stdin=stdin, stdout=out, stderr=err)
        assert code == 0, err.getvalue()
        assert (tmp_path / "r.csv").exists()

    def test_interactive_abort_exit_1(self, small_fixture_dir, tmp_path):
        stdin = io.StringIO("".join(a + "\n" for a in
                                    ["tf.function", "", "", "", "", "", "", "n"]))
        out, err = io.StringIO(), io.StringIO()
        code = main([
            "--interactive", "--fixtures", str(small_fixture_dir),
            "--output", str(tmp_path / "r.csv"), "--omitted-output", str(tmp_path / "o.csv"),
        ], {}, stdin=stdin, stdout=out, stderr=err)
        assert code == 1
        assert not (tmp_path / "r.csv").exists()

    def test_confidence_flag_adds_column(self, small_fixture_dir, tmp_path):
        results = tmp_path / "results.csv"
        code, _, _ = self.run_main([
            "--query", "tf.function", "--fixtures", str(small_fixture_dir),
            "--confidence",
            "--output", str(results), "--omitted-output", str(tmp_path / "o.csv"),
        ])
        assert code == 0
        header = results.read_text(encoding="utf-8").splitlines()[0]
        assert header.endswith(",confidence")

    def test_diagnostics_never_on_stdout(self):
        code, out, err = self.run_main(["--limit", "9999", "--query", "x"])
        assert code == 1
        assert out == ""
        assert err != ""
