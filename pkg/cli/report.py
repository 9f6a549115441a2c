"""
Report assembly for one ring
Groups are written as invariant factor lists and ring elements by their labels;
matrices appear as words in the elementary generators of E_2(A)
"""

import json
import logging
import time
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple

import psutil

from algebra.matgroup import (abelianization, central_quotient, e2_group, mat_label,
                              minus_identity, product_orders)
from algebra.ringkit import (FiniteRing, a_lower, build_ring, local_decomposition, m_subgroup,
                             square_class_group, tilde_extension, unit_data, units_group, w_set)
from config.dynamic_config import get_config
from homology.barhom import (connecting_replay, f_cycle, g_cycle, h_cycle, r_chain,
                             shuffle_product, verify_cycle)
from homology.bloch import bloch_suite, sym_square, wedge_quotient
from homology.invariants import (bar_witt_suite, borel_abelian_check, d1_differentials,
                                 d2_differential, d2_well_defined, grothendieck_witt, h1_compare,
                                 h1_exact_sequence, i_squared, replay_d2_proof)
from homology.unimod import augmentation_exact, build_y_complex, y_coinvariants, y_homology
from utils.errors import CapExceededError, DomainError, E2HomLabError

logger = logging.getLogger(__name__)

SECTIONS = ('ring', 'complex', 'gw', 'h1', 'differentials', 'cycles', 'bloch')

# Aliases accepted by --checks
ALIASES = {
    'all': SECTIONS,
    'd1': ('differentials',),
    'd2': ('differentials',),
    'witt': ('gw',),
}

Y_INTERPRETATION = "H_1(Y_•(A^2)) ≅ (K_2(2,A)/C(2,A))^ab"


def parse_checks(text: Optional[str]) -> Tuple[str, ...]:
    """Comma-separated section names, in report order"""
    if not text:
        return SECTIONS
    wanted = set()
    for item in text.split(','):
        item = item.strip().lower()
        if not item:
            continue
        if item in ALIASES:
            wanted.update(ALIASES[item])
        elif item in SECTIONS:
            wanted.add(item)
        else:
            raise ValueError(f"unknown check {item!r}; choose from {', '.join(SECTIONS)}")
    return tuple(s for s in SECTIONS if s in wanted)


def render_json(report: Dict[str, Any]) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


class ReportBuilder:
    """Computes report sections for one ring, sharing the complex and the group tables"""

    def __init__(self, ring: FiniteRing, degree: int):
        self.ring = ring
        self.degree = degree
        self._complex = None
        self._e2 = None
        self._gw = None

    @property
    def complex(self):
        if self._complex is None:
            self._complex = build_y_complex(self.ring, self.degree, truncate=True)
        return self._complex

    @property
    def e2(self):
        if self._e2 is None:
            self._e2 = e2_group(self.ring)
        return self._e2

    @property
    def gw(self):
        if self._gw is None:
            self._gw = grothendieck_witt(self.ring, self.complex)
        return self._gw

    def label(self, x: int) -> str:
        return self.ring.label(x)

    # Sections
    def ring_section(self) -> Dict[str, Any]:
        ring = self.ring
        units = unit_data(ring)
        local = local_decomposition(ring)
        classes, _ = square_class_group(ring)
        _, a_mod_m = m_subgroup(ring)
        return {
            'size': ring.size,
            'units': len(units.units),
            'square_classes': [self.label(r) for r in units.class_reps],
            'G_A': classes.to_json(),
            'W_A': len(w_set(ring)),
            'mu2': [self.label(u) for u in units.mu2],
            'local_factors': [{'size': len(f.members), 'residue_field': f.residue_size}
                              for f in local.factors],
            'universal': local.universal,
            'two_invertible': ring.is_unit(ring.integer(2)),
            'A_mod_M': a_mod_m.to_json(),
            'A_lower': {'ideal': a_lower(ring).to_json(), 'elements': a_lower(ring, 'elements').to_json()},
            'tilde_mu': _tilde_mu(ring),
        }

    def complex_section(self) -> Dict[str, Any]:
        c = self.complex
        homology = {f"H{k}": y_homology(c, k).to_json() for k in range(c.max_degree)}
        coinvariants = {}
        for n in range(2, min(c.max_degree, 3) + 1):
            group, labels = y_coinvariants(c, n)
            coinvariants[f"Y{n}"] = {'rank': group.rank, 'symbols': labels}
        return {
            'degree': c.max_degree,
            'sizes': [c.rank(n) for n in range(c.max_degree + 1)],
            'homology': homology,
            'augmentation_exact': augmentation_exact(c) if c.max_degree >= 1 else None,
            'coinvariants': coinvariants,
            'interpretation': Y_INTERPRETATION,
        }

    def gw_section(self) -> Dict[str, Any]:
        gw = self.gw
        units = unit_data(self.ring)
        section = {
            'GW': gw.group.to_json(),
            'I': gw.i_group.to_json(),
            'epsilon_surjective': gw.epsilon_surjective,
            'pfister': {self.label(r): list(gw.pfister(r)) for r in units.class_reps},
        }
        try:
            i2 = i_squared(self.ring, gw)
            section['I2'] = {
                'group': i2.group.to_json(),
                'I_mod_I2': i2.quotient.to_json(),
                'd2_image': i2.d2_image.to_json(),
                'generated_by_pfister': i2.generated_by_pfister,
            }
        except DomainError as e:
            section['I2'] = {'refused': str(e)}
        bar = bar_witt_suite(self.ring, gw)
        section['bar'] = {
            'GW': bar.gw_bar.to_json(),
            'I': bar.i_bar.to_json(),
            'I2': bar.i_bar_squared.to_json(),
            'I_mod_I2': bar.quotient.to_json(),
            'quotient_is_G_A': bar.quotient_ok,
            'comparison': {
                'well_defined': bar.comparison_well_defined,
                'surjective': bar.comparison_surjective,
                'bijective': bar.bijective,
            },
            'I_cokernel': bar.i_cokernel.to_json() if bar.i_cokernel is not None else None,
            'H1_Y_coinvariants': bar.y_h1_coinvariants.to_json() if bar.y_h1_coinvariants is not None else None,
            'exact': bar.exact,
        }
        return section

    def h1_section(self) -> Dict[str, Any]:
        compare = h1_compare(self.ring, self.e2)
        sequence = h1_exact_sequence(self.ring, self.e2)
        pe2 = abelianization(central_quotient(self.e2))
        return {
            'A_mod_M': compare.a_mod_m.to_json(),
            'H1_E2': compare.h1.to_json(),
            'H1_PE2': pe2.to_json(),
            'E2_order': len(self.e2),
            'E2_factor_orders': list(product_orders(self.ring, self.e2) or ()),
            'universal': compare.universal,
            'verdict': compare.verdict,
            'surjection_ok': compare.surjection_ok,
            'exact_sequence': {
                'cokernel': sequence.cokernel.to_json(),
                'checks': dict(sorted(sequence.checks.items())),
                'passed': sequence.passed,
            },
        }

    def differentials_section(self) -> Dict[str, Any]:
        ring = self.ring
        units = unit_data(ring)
        d1 = d1_differentials(ring)
        borel = borel_abelian_check(ring)
        d2 = {}
        replays = 0
        for u in units.units:
            value = d2_differential(ring, u)
            if u in units.class_reps:
                d2[self.label(u)] = {'class': self.label(value.class_rep), 'lower': list(value.lower)}
            replays += replay_d2_proof(ring, u).passed
        return {
            'd1': {
                'kernel': [self.label(u) for u in d1.kernel],
                'kernel_is_mu2': d1.kernel_is_mu2,
                'cokernel': d1.cokernel.to_json(),
                'expected': d1.expected.to_json(),
            },
            'borel': {
                'abelianization': borel.abelianization.to_json(),
                'expected': borel.expected.to_json(),
                'isomorphic': borel.isomorphic,
                'torus_iso': borel.torus_iso,
            },
            'd2': d2,
            'd2_well_defined': d2_well_defined(ring),
            'd2_replays': {'passed': replays, 'total': len(units.units)},
        }

    def cycles_section(self) -> Dict[str, Any]:
        ring = self.ring
        if not ring.is_unit(ring.integer(2)):
            return {'skipped': f"2 is not a unit of {ring.name}"}
        units = unit_data(ring).units
        tallies = {'F': [0, 0], 'G': [0, 0], 'H': [0, 0], 'shuffle': [0, 0], 'connecting': [0, 0]}
        minus = minus_identity(ring)

        def tally(key, ok):
            tallies[key][0] += bool(ok)
            tallies[key][1] += 1

        for a in units:
            for b in units:
                f = f_cycle(ring, a, b)
                tally('F', verify_cycle(f))
                tally('H', verify_cycle(h_cycle(ring, a, b)))
                tally('shuffle', _shuffles(minus, f))
        for x in ring.elements:
            for y in ring.elements:
                tally('G', verify_cycle(g_cycle(ring, x, y)))
        if self.complex.max_degree >= 2:
            for a in units:
                for b in units:
                    tally('connecting', connecting_replay(ring, a, b, self.complex, self.gw).passed)
        section: Dict[str, Any] = {k: {'passed': v[0], 'total': v[1]} for k, v in tallies.items()}
        u = unit_data(ring).class_reps[-1]
        section['representatives'] = {
            'F': {'arguments': [self.label(u), self.label(u)], 'terms': self.bar_terms(f_cycle(ring, u, u))},
            'R': {'arguments': [self.label(u)], 'terms': self.bar_terms(r_chain(ring, u))},
        }
        return section

    def bar_terms(self, chain) -> List[Dict[str, Any]]:
        """Bars as words in the elementary generators of E_2(A), matrices alongside."""
        terms = [{'coefficient': c,
                  'words': [self.e2.spell(m) for m in bar],
                  'matrices': [mat_label(self.ring, m) for m in bar]}
                 for bar, c in chain.terms.items()]
        return sorted(terms, key=lambda t: (t['words'], t['coefficient']))

    def bloch_section(self) -> Dict[str, Any]:
        c = self.complex
        if c.max_degree < 3:
            return {'skipped': f"complex stops at degree {c.max_degree}"}
        report = bloch_suite(self.ring, c)
        kills1, kills2 = report.lambdas.kills_relations
        section = {
            'RP_bar': {
                'group': report.rp_bar.group.to_json(),
                'symbols': report.rp_bar.size,
                'five_term_instances': len(report.rp_bar.instances),
                'five_term_skipped': len(report.rp_bar.skipped),
            },
            'lambda_bar': {'lambda1_kills_relations': kills1, 'lambda2_kills_relations': kills2},
            'RP': report.geometric.group.to_json(),
            'RP1': report.geometric.rp1.to_json(),
            'eta': {
                'well_defined': report.eta.well_defined,
                'surjective': report.eta.surjective,
                'bijective': report.eta.bijective,
                'lambda_compatible': report.eta.lambda_compatible,
                'five_term_syzygy': report.eta.syzygy,
                'exact_below_4': report.eta.exact,
                'iso_flag': report.eta.iso_flag,
                'kernel': report.eta_kernel.to_json(),
            },
            'S2': sym_square(self.ring).group.to_json(),
            'wedge_mod_mu2': wedge_quotient(self.ring).group.to_json(),
            'alpha': {'well_defined': report.alpha.well_defined, 'injective': report.alpha.injective,
                      'kernel': report.alpha.kernel.to_json()},
            'lambda2_on_RP': 'defined on symbol images, relations verified',
        }
        if report.refined is None:
            section['refined'] = {'refused': report.refused}
        else:
            r = report.refined
            section['refined'] = {
                'RB': r.rb.to_json(),
                'RB_bar': r.rb_bar.to_json(),
                'RP1_bar': r.rp1_bar.to_json(),
                'comparison_kernel': r.comparison_kernel.to_json(),
                'lambda2_well_defined': r.lambda2_well_defined,
                'alpha_compatible': r.alpha_compatible,
                'RP1_matches_geometric': r.rp1_matches_geometric,
            }
        return section


def _tilde_mu(ring: FiniteRing) -> Dict[str, Any]:
    """Ã for A = μ(A), defined only when μ(A) is cyclic."""
    mu, _ = units_group(ring)
    section: Dict[str, Any] = {'mu': mu.to_json()}
    if len(mu.invariants) > 1:
        section['group'] = None
        section['reason'] = f"μ({ring.name}) = {mu} is not cyclic"
    else:
        section['group'] = tilde_extension(len(ring.units)).to_json()
    return section


def _shuffles(c, z) -> bool:
    try:
        shuffle_product(c, z)
        return True
    except E2HomLabError as e:
        logger.debug(f"shuffle product failed: {e}")
        return False


def run_report(spec_text: str, degree: Optional[int] = None, checks: Iterable[str] = SECTIONS,
               timing: bool = False) -> Dict[str, Any]:
    """Build the report for one ring spec.

    Parse errors and a ring over the size cap propagate; a section whose
    computation would exceed a cap is recorded as skipped.
    """
    settings = get_config()
    degree = settings.MAX_DEGREE if degree is None else degree
    if not 0 <= degree <= 4:
        raise ValueError("degree must lie in 0..4")
    ring = build_ring(spec_text)
    builder = ReportBuilder(ring, degree)
    report: Dict[str, Any] = {
        'schema_version': settings.SCHEMA_VERSION,
        'artifact_version': settings.ARTIFACT_VERSION,
        'ring': {'spec': ring.name},
    }
    millis = {}
    for name in checks:
        method: Callable[[], Dict[str, Any]] = getattr(builder, f"{name}_section")
        start = time.perf_counter()
        try:
            section = method()
        except CapExceededError as e:
            logger.warning(f"{ring.name}: section {name} skipped: {e}")
            section = {'skipped': str(e)}
        millis[name] = int((time.perf_counter() - start) * 1000)
        if name == 'ring':
            report['ring'].update(section)
        else:
            report[name] = section
    if timing:
        report['timing'] = {
            'millis': millis,
            'rss_bytes': psutil.Process().memory_info().rss,
        }
    logger.info(f"Report for {ring.name} done in {sum(millis.values())} ms")
    return report
