import json
from unittest.mock import patch
from koszulkit.cli import build_parser, main

def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err

def test_koszul_of_twisted_cubic(capsys):
    code, out, _ = _run(capsys, 'koszul', '--b', '0', '--d', '3', '--p', '1', '--q', '1')
    assert code == 0
    assert out == '3\n'

def test_global_flags_after_command(capsys):
    code, out, _ = _run(capsys, 'koszul', '--format', 'json', '--b', '0', '--d', '3', '--p', '1', '--q', '1')
    assert code == 0
    assert json.loads(out) == {'dimension': 3, 'p': 1, 'q': 1}

def test_betti_of_point(capsys):
    code, out, _ = _run(capsys, 'betti', '--vars', 'x,y', 'x', 'y')
    assert code == 0
    assert out.splitlines()[1:] == ['total: 1 2 1', '    0: 1 2 1']

def test_betti_json(capsys):
    code, out, _ = _run(capsys, '--format', 'json', 'betti', '--vars', 'x,y', 'x', 'y')
    assert code == 0
    assert json.loads(out) == {'entries': [[0, 0, 1], [1, 0, 2], [2, 0, 1]]}

def test_betti_from_module_file(capsys, tmp_path):
    path = tmp_path / 'point.txt'
    path.write_text('vars: x, y\nshifts: 0\nrelation: x\nrelation: y\n')
    code, out, _ = _run(capsys, '--format', 'csv', 'betti', '--input', str(path))
    assert code == 0
    assert out == 'p,q,value\n0,0,1\n1,0,2\n2,0,1\n'

def test_koszul_table_csv(capsys):
    code, out, _ = _run(capsys, '--format', 'csv', 'koszul', '--vars', 'x,y', '--p', '0:2', '--q', '0', 'x', 'y')
    assert code == 0
    assert out == 'p,q,value\n0,0,1\n1,0,2\n2,0,1\n'

def test_csv_not_available(capsys):
    code, _, err = _run(capsys, '--format', 'csv', 'koszul', '--b', '0', '--d', '3', '--p', '1', '--q', '1')
    assert code == 1
    assert err.startswith('error:')

def test_resolve(capsys):
    code, out, _ = _run(capsys, 'resolve', '--vars', 'x,y', 'x', 'y')
    assert code == 0
    assert out.splitlines()[0] == 'ranks: 1 <- 2 <- 1'

def test_gb(capsys):
    code, out, _ = _run(capsys, 'gb', '--vars', 'x,y', 'x^2 + y', 'x*y')
    assert code == 0
    assert sorted(out.splitlines()) == ['x*y', 'x^2 + y', 'y^2']

def test_gb_over_prime_field(capsys):
    code, out, _ = _run(capsys, '--field', 'fp:2', 'gb', '--vars', 'x,y', 'x + 3*y')
    assert code == 0
    assert out == 'x + y\n'

def test_eliminate(capsys):
    code, out, _ = _run(capsys, 'eliminate', '--vars', 't,x,y', '--keep', 'x,y', 'x - t', 'y - t^2')
    assert code == 0
    assert out == 'x^2 - y\n'

def test_intersect(capsys):
    code, out, _ = _run(capsys, 'intersect', '--vars', 'x,y', '--ideal', 'x', '--ideal', 'y')
    assert code == 0
    assert out == 'x*y\n'

def test_sections(capsys):
    code, out, _ = _run(capsys, 'sections', '--b', '0', '--d', '3', '--q-max', '2')
    assert code == 0
    assert out.splitlines()[:3] == ['0: 1', '1: 4', '2: 7']
    assert 'vars: z0, z1, z2, z3' in out

def test_sections_with_points(capsys, tmp_path):
    path = tmp_path / 'points.json'
    path.write_text(json.dumps({
        'ambient': 2,
        'degree': 1,
        'schemes': [{'kind': 'fat-point', 'point': [1, 0, 0], 'order': 2}],
    }))
    code, out, _ = _run(capsys, 'sections', '--points', str(path))
    assert code == 0
    assert out == 'fat-point: length 3, rank 3/3, surjective\n'

def test_ample(capsys):
    code, out, _ = _run(capsys, 'ample', '--degree', '2', '--p-max', '3')
    assert code == 0
    assert out.splitlines()[-1] == 'order: 2 (proved)'

def test_curve_bound(capsys):
    code, out, _ = _run(
        capsys, '--format', 'json', 'curve-bound', '--g', '0', '--d', '3', '--b', '0', '--p', '1', '--h0b', '1'
    )
    assert code == 0
    data = json.loads(out)
    assert data['chi_rr'] == '9'
    assert data['chi_closed_form'] == '6'
    assert data['criterion']['verdict'] == 'certified'

def test_curve_bound_precondition(capsys):
    code, _, _ = _run(capsys, 'curve-bound', '--g', '0', '--d', '3', '--b', '0', '--p', '1', '--h0b', '2')
    assert code == 1

def test_polygraph_free_case(capsys):
    code, out, _ = _run(capsys, 'polygraph', '--n', '1', '--k', '2')
    assert code == 0
    assert 'ext-zero' in out

def test_polygraph_guard(capsys):
    code, _, err = _run(capsys, 'polygraph', '--n', '4', '--k', '1')
    assert code == 2
    assert 'guard' in err

def test_report(capsys):
    code, out, _ = _run(capsys, 'report', '--n-max', '2', '--p-max', '3', '--n', '2', '--p', '3')
    assert code == 0
    assert 'd >= 10' in out
    assert out.splitlines()[2].split() == ['2', '4', '6', '8', '10']

def test_report_line_syzygies(capsys):
    code, out, _ = _run(capsys, '--format', 'json', 'report', '--line-degree', '4', '--p', '1')
    assert code == 0
    assert json.loads(out)['line_syzygies']['koszul_dimension'] == 8

def test_input_errors(capsys):
    assert _run(capsys, 'gb', '--vars', 'x', 'y')[0] == 1
    assert _run(capsys, 'nonsense')[0] == 1
    assert _run(capsys, '--field', 'fp:4', 'gb', '--vars', 'x', 'x')[0] == 1
    assert _run(capsys, '--threads', '0', 'gb', '--vars', 'x', 'x')[0] == 1
    assert _run(capsys, 'betti', '--input', '/nonexistent/module.txt')[0] == 1

def test_basis_limit_exit_code(capsys):
    code, _, err = _run(capsys, '--max-basis', '1', 'gb', '--vars', 'x,y', 'x^2 + y', 'x*y')
    assert code == 2
    assert 'size limit' in err

def test_json_output_is_deterministic(capsys):
    argv = ('--format', 'json', '--threads', '2', 'koszul', '--vars', 'x,y,z', '--p', '0:3', '--q', '0:3',
            'x^2', 'y^2', 'z^2')
    first = _run(capsys, *argv)[1]
    second = _run(capsys, *argv)[1]
    assert first == second
    assert [3, 3, 1] in json.loads(first)['entries']

def test_out_file(capsys, tmp_path):
    target = tmp_path / 'result.txt'
    code, out, _ = _run(capsys, '--out', str(target), 'koszul', '--b', '0', '--d', '3', '--p', '2', '--q', '1')
    assert code == 0
    assert out == ''
    assert target.read_text() == '2\n'

def test_verify_exit_code(capsys):
    failing = {'level': 'fast', 'seed': 0, 'criteria': {'duality': {'passed': False, 'details': {}}}, 'passed': False}
    with patch('koszulkit.cli.verify_suite', return_value=failing) as mock_suite:
        code, out, _ = _run(capsys, 'verify', '--seed', '5')
        mock_suite.assert_called_once_with('fast', 5, 1)
    assert code == 3
    assert out == 'FAIL duality\n'

def test_parser_defaults():
    args = build_parser().parse_args(['koszul', '--b', '-1', '--d', '2'])
    assert args.b == -1
    assert args.field == 'qq'
    assert args.threads == 1
