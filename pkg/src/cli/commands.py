"""
Subcommand pipelines.

Each command builds a Report of named checks; errors raised by the library
packages become records through Report.run_check, so one failing check
never hides the others.
"""
from typing import Sequence
import logging

from src.cli.report import Report, Stopwatch
from src.cli.run_config import RunConfig
from src.kth.groups import (
    base_kgroups, closed_form_matrix, expected_kgroups, gysin_kgroups, transpose_duality,
)
from src.kth.smith import IntMatrix
from src.ncalg.bundle import (
    bundle_generators, commutator_expansion_check, is_idempotent, line_idempotent,
    power_certificate, verify_partition_of_unity, verify_wq_relations, wq_commutation_details,
)
from src.ncalg.ncpoly import lens_membership, term_budget
from src.ncalg.rewriting import (
    RULES, Rule, check_confluence, check_relation_soundness, check_rule_soundness,
    random_words, rewrite, star_word_check,
)
from src.pairing.index import pairing_matrix
from src.pairing.traces import (
    commutator_trace, commutator_trace_closed_form, exact_commutator_identity, sqrt_b_trace,
)
from src.rep.sphere import RELATION_TOLERANCE, SphereRep

logger = logging.getLogger(__name__)


def cmd_verify_sphere(run: RunConfig, rules: Sequence[Rule] = RULES) -> Report:
    """Soundness and confluence of the rewriting system plus the numeric oracle."""
    report = Report('verify-sphere', run.echo())
    sphere = run.sphere
    with Stopwatch(report), term_budget(run.max_terms):
        def rule_soundness():
            results = check_rule_soundness(rules)
            unsound = sorted(name for name, ok in results.items() if not ok)
            report.add('rule_soundness', not unsound,
                       f"unsound rules: {', '.join(unsound)}" if unsound else f"{len(results)} rules sound",
                       unsound=unsound)

        def relation_soundness():
            results = check_relation_soundness(rules, pairs=sphere.relation_pairs, seed=run.seed)
            failing = sorted(name for name, ok in results.items() if not ok)
            report.add('relation_soundness', not failing,
                       f"failing relations: {', '.join(failing)}" if failing
                       else f"{len(results)} relations hold in {sphere.relation_pairs} contexts",
                       failing=failing)

        def confluence():
            failures = check_confluence(rules, count=sphere.confluence_words,
                                        max_length=sphere.confluence_length, seed=run.seed)
            report.add('confluence', not failures,
                       f"{len(failures)} of {sphere.confluence_words} words disagree",
                       failures=len(failures),
                       first_failure=' '.join(failures[0]) if failures else None)

        def numeric_oracle():
            rep = SphereRep(sphere.q, sphere.n1, sphere.n2)
            worst, worst_word = 0.0, ()
            for word in random_words(sphere.words, sphere.word_length, run.seed + 2):
                residual = rep.word_oracle_residual(word, rewrite(word, rules=rules))
                if residual > worst:
                    worst, worst_word = residual, word
            report.add('numeric_oracle', worst <= sphere.oracle_tolerance,
                       f"max relative residual {worst:.3e} over {sphere.words} words",
                       max_residual=worst, worst_word=' '.join(worst_word))

        def sphere_relations():
            residuals = SphereRep(sphere.q, sphere.n1, sphere.n2).residuals
            worst = max(residuals.values())
            report.add('sphere_relations', worst <= RELATION_TOLERANCE,
                       f"max residual {worst:.3e}", residuals=residuals)

        def star_compatibility():
            ok = star_word_check(random_words(sphere.words, sphere.word_length, run.seed + 3))
            report.add('star_compatibility', ok, 'star commutes with the normal form' if ok else '')

        for name, check in (('rule_soundness', rule_soundness),
                            ('relation_soundness', relation_soundness),
                            ('confluence', confluence),
                            ('numeric_oracle', numeric_oracle),
                            ('sphere_relations', sphere_relations),
                            ('star_compatibility', star_compatibility)):
            report.run_check(name, check)
    return report


def cmd_bundle_check(run: RunConfig) -> Report:
    """Partition of unity, power certificates and idempotents for (k, l, d)."""
    report = Report('bundle-check', run.echo())
    k, l, d = run.k, run.l, run.d
    with Stopwatch(report), term_budget(run.max_terms):
        certs, powered = [], []

        def partition():
            certs.append(bundle_generators(k, l))
            report.add('partition_of_unity', verify_partition_of_unity(certs[0]), f"(k, l) = ({k}, {l})")

        report.run_check('partition_of_unity', partition)

        def power():
            if not certs:
                return
            powered.append(power_certificate(certs[0], d))
            report.add('power_certificate', verify_partition_of_unity(powered[0]),
                       f"d = {d}, {len(powered[0].xi)} terms", terms=len(powered[0].xi))

        report.run_check('power_certificate', power)

        def idempotent(sign: int, name: str):
            if certs:
                report.add(name, is_idempotent(line_idempotent(certs[0], sign)), f"charge {sign * k * l}")

        for sign, name in ((1, 'idempotent_plus'), (-1, 'idempotent_minus')):
            report.run_check(name, lambda sign=sign, name=name: idempotent(sign, name))

        def membership():
            if not powered:
                return
            entries = powered[0].xi + powered[0].eta + powered[0].alpha + powered[0].beta
            outside = sum(1 for x in entries if not lens_membership(x, k, l, d))
            report.add('lens_membership', outside == 0,
                       f"{len(entries) - outside} of {len(entries)} entries at level {d}",
                       outside=outside)

        report.run_check('lens_membership', membership)

        def wq_relations():
            results = verify_wq_relations(k, l)
            failing = sorted(n for n, ok in results.items() if not ok)
            report.add('wq_relations', not failing,
                       f"failing: {', '.join(failing)}" if failing else f"{len(results)} relations hold",
                       failing=failing)

        report.run_check('wq_relations', wq_relations)

        def commutation():
            results = wq_commutation_details(l)
            failing = sorted(n for n, ok in results.items() if not ok)
            report.add('wq_commutation', not failing,
                       f"failing: {', '.join(failing)}" if failing else 'z0^l and z0s^l expansions agree',
                       failing=failing)

        report.run_check('wq_commutation', commutation)
        report.run_check('commutator_expansion', lambda: report.add(
            'commutator_expansion', commutator_expansion_check(l), f"l = {l}"))
    return report


def cmd_pairing(run: RunConfig) -> Report:
    """Certified pairing matrix plus commutator and generator traces."""
    report = Report('pairing', run.echo())
    k, l, q, n = run.k, run.l, run.q, run.N
    settings = run.certification
    with Stopwatch(report):
        def matrix():
            result = pairing_matrix(k, l, q, n, settings, workers=run.threads)
            report.add('pairing_matrix', True,
                       f"M = I + N0 certified, max bound {result.max_bound:.3e}",
                       pairing=result.to_dict())
            report.details['M'] = [list(row) for row in result.M]

        report.run_check('pairing_matrix', matrix)

        for s in range(1, l + 1):
            def commutator(s=s):
                trace = commutator_trace(l, s, q, n, settings)
                value = trace.certified_integer(settings.rounding_threshold)
                closed = commutator_trace_closed_form(l, s, q)
                ok = value == 1 and trace.contains(closed) and exact_commutator_identity(l, s)
                report.add(f'commutator_trace_s{s}', ok,
                           f"{trace.value:.12f} +- {trace.bound:.1e}", trace=trace.to_dict(),
                           closed_form=closed)

            def sqrt_b(s=s):
                trace = sqrt_b_trace(l, s, q, n, settings)
                closed = q ** s / (1 - q ** l)
                report.add(f'sqrt_b_trace_s{s}', trace.contains(closed),
                           f"{trace.value:.12f} vs {closed:.12f}", trace=trace.to_dict(),
                           closed_form=closed)

            report.run_check(f'commutator_trace_s{s}', commutator)
            report.run_check(f'sqrt_b_trace_s{s}', sqrt_b)
    return report


def cmd_kgroups(run: RunConfig) -> Report:
    """K-groups from the Gysin sequence with the certified or closed-form M."""
    report = Report('kgroups', run.echo())
    with Stopwatch(report):
        def groups():
            if run.closed_form:
                m = closed_form_matrix(run.l)
                source = 'closed form'
            else:
                m = IntMatrix.from_rows(
                    pairing_matrix(run.k, run.l, run.q, run.N, run.certification,
                                   workers=run.threads).M)
                source = 'certified'
            computed = gysin_kgroups(m, run.d)
            expected = expected_kgroups(run.l, run.d)
            report.add('kgroups', computed == expected, f"M from {source}",
                       computed=computed.to_dict(), expected=expected.to_dict())
            report.details.update(computed.to_text())
            failures = transpose_duality(computed)
            report.add('transpose_duality', not failures,
                       f"failing: {', '.join(failures)}" if failures else 'K0/K^0 and K0/K^1 match',
                       failing=failures)

        report.run_check('kgroups', groups)

        def base():
            m = closed_form_matrix(run.l)
            computed = gysin_kgroups(m, 1)
            base = base_kgroups(run.l)
            ok = computed == expected_kgroups(run.l, 1) and base['K0'].rank == m.nrows
            report.add('base_case', ok,
                       f"K0 of the base = {base['K0']}, d = 1 gives K0 = {computed.K0}")

        report.run_check('base_case', base)
    return report


def cmd_report(run: RunConfig, rules: Sequence[Rule] = RULES) -> Report:
    """The full pipeline; its exit code is the worst of all checks."""
    report = Report('report', run.echo())
    with Stopwatch(report):
        for prefix, build in (('sphere', lambda: cmd_verify_sphere(run, rules)),
                              ('bundle', lambda: cmd_bundle_check(run)),
                              ('pairing', lambda: cmd_pairing(run)),
                              ('kgroups', lambda: cmd_kgroups(run))):
            logger.info(f"Running {prefix} stage")
            report.merge(build(), prefix)
    return report


COMMANDS = {
    'verify-sphere': cmd_verify_sphere,
    'bundle-check': cmd_bundle_check,
    'pairing': cmd_pairing,
    'kgroups': cmd_kgroups,
    'report': cmd_report,
}
