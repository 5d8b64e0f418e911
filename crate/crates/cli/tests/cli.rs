use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        fs::write(&path, text).unwrap();
        path
    }
}

fn nnipcg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nnipcg")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn explain_star_gives_triangle() {
    let ws = Workspace::new();
    let tree = ws.file("s3.nwk", "(a:1,b:1,c:1);\n");
    let o = nnipcg(&["explain", arg(&tree)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "# names: a b c\n3 3\n0 1\n0 2\n1 2\n");
    let o = nnipcg(&["explain", arg(&tree), "--k", "5"]);
    assert!(stdout(&o).contains("3 0\n"));
}

#[test]
fn explain_rooted_tree() {
    let ws = Workspace::new();
    let tree = ws.file("r.nwk", "(a:0,(b:1,c:1):1);\n");
    let o = nnipcg(&["explain", "--rooted", arg(&tree)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "# names: a b c\n3 2\n0 1\n0 2\n");
}

#[test]
fn recognize_exit_codes() {
    let ws = Workspace::new();
    let c5 = ws.file("c5.txt", "5 5\n0 1\n1 2\n2 3\n3 4\n4 0\n");
    let o = nnipcg(&["recognize", arg(&c5)]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "not explainable; non-clique block: 0 1 2 3 4\n");

    let bowtie = ws.file("bowtie.txt", "5 6\n0 1\n0 2\n1 2\n2 3\n2 4\n3 4\n");
    let o = nnipcg(&["recognize", arg(&bowtie)]);
    assert_eq!(o.status.code(), Some(0));
    let witness = ws.file("w.nwk", &stdout(&o));
    let o = nnipcg(&["verify", arg(&witness), arg(&bowtie)]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "OK\n"));

    let k1 = ws.file("k1.txt", "1 0\n");
    let o = nnipcg(&["recognize", arg(&k1)]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "0;\n"));
}

#[test]
fn recognize_oriented() {
    let ws = Workspace::new();
    let in_star = ws.file("in.txt", "4 3\n0 1\n2 1\n3 0\n");
    let o = nnipcg(&["recognize", "--oriented", arg(&in_star)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("in-star"));
    let path = ws.file("path.txt", "3 2\n0 1\n1 2\n");
    let o = nnipcg(&["recognize", "--oriented", arg(&path)]);
    assert_eq!(o.status.code(), Some(0));
    let tree = ws.file("t.nwk", &stdout(&o));
    let o = nnipcg(&["verify", "--rooted", arg(&tree), arg(&path)]);
    assert_eq!(stdout(&o), "OK\n");
}

#[test]
fn verify_p4_caterpillar() {
    let ws = Workspace::new();
    let tree = ws.file("p4.nwk", "(0:2,1:0,(2:0,3:2):2);");
    let graph = ws.file("p4.txt", "4 3\n0 1\n1 2\n2 3\n");
    let o = nnipcg(&["verify", arg(&tree), arg(&graph)]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "OK\n"));
    let o = nnipcg(&["verify", arg(&tree), arg(&graph), "--k", "4"]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(1), "MISMATCH\n"));
}

#[test]
fn roots_of_a_two_cherry_tree() {
    let ws = Workspace::new();
    let tree = ws.file("t.nwk", "((a:1,b:1):1,c:1,d:1);");
    let o = nnipcg(&["roots", arg(&tree)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 6);
    let o = nnipcg(&["roots", "--dot", arg(&tree)]);
    assert_eq!(stdout(&o).matches("digraph").count(), 6);
}

#[test]
fn canonicalize_and_quotient() {
    let ws = Workspace::new();
    let tree = ws.file("t.nwk", "((a:1,b:1):0,(c:1,d:1):0);");
    let o = nnipcg(&["canonicalize", arg(&tree)]);
    assert_eq!(stdout(&o), "(a:1,b:1,c:1,d:1);\n");
    let c4 = ws.file("c4.txt", "4 4\n0 1\n1 2\n2 3\n3 0\n");
    let o = nnipcg(&["quotient", arg(&c4)]);
    assert_eq!(stdout(&o), "# class: 0 2\n# class: 1 3\n2 1\n0 1\n");
}

#[test]
fn oracle_lists_forbidden_four_vertex_graphs() {
    let ws = Workspace::new();
    let summary = ws.dir.path().join("summary.json");
    let o = nnipcg(&["oracle", "--n", "4", "--zero-discrete", "--summary", summary.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("non-members n=4: 2\n"));
    assert!(text.contains("# not explainable\n4 4\n"));
    assert!(text.contains("# not explainable\n4 5\n"));
    let json = fs::read_to_string(summary).unwrap();
    assert!(json.contains("\"zero_discrete_only\": true"));
}

#[test]
fn dot_output() {
    let ws = Workspace::new();
    let tree = ws.file("t.nwk", "(a:0,b:2,c:2);");
    let o = nnipcg(&["recognize", "--dot", arg(&ws.file("g.txt", "3 1\n1 2\n"))]);
    assert!(stdout(&o).starts_with("graph T {"));
    let o = nnipcg(&["explain", "--dot", arg(&tree)]);
    assert!(stdout(&o).starts_with("graph G {"));
}

#[test]
fn errors_exit_with_two() {
    let ws = Workspace::new();
    let bad = ws.file("bad.nwk", "(a:1,\n b:x);");
    let o = nnipcg(&["explain", arg(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 2, column 4"), "{err}");
    assert_eq!(nnipcg(&["explain", "/no/such/file"]).status.code(), Some(2));
    assert_eq!(nnipcg(&["explain", arg(&bad), "--k", "0"]).status.code(), Some(2));
    assert_eq!(nnipcg(&["frobnicate"]).status.code(), Some(2));
    let graph = ws.file("g.txt", "3 1\n0 7\n");
    assert_eq!(nnipcg(&["recognize", arg(&graph)]).status.code(), Some(2));
}

#[test]
fn output_file_is_byte_stable() {
    let ws = Workspace::new();
    let graph = ws.file("g.txt", "6 7\n0 1\n0 2\n1 2\n2 3\n3 4\n3 5\n4 5\n");
    let (a, b) = (ws.dir.path().join("a.nwk"), ws.dir.path().join("b.nwk"));
    for out in [&a, &b] {
        assert_eq!(nnipcg(&["recognize", arg(&graph), "--out", arg(out)]).status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}
