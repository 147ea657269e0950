"""Run configuration assembled from config.yaml and command-line flags."""
from dataclasses import asdict, dataclass, field
from math import gcd
from typing import Any, Dict, Mapping, Optional

from src.errors import UsageError
from src.pairing.index import threads_from_env
from src.pairing.traces import CertificationSettings

MIN_RUN_DIMENSION = 32

# flag name -> key in the 'run' section
FLAG_KEYS = {
    'k': 'k',
    'l': 'l',
    'd': 'd',
    'q': 'q',
    'dim': 'dim',
    'seed': 'seed',
    'format': 'format',
    'out': 'out',
}


@dataclass(frozen=True)
class SphereSettings:
    n1: int = 24
    n2: int = 24
    q: float = 0.7
    words: int = 200
    word_length: int = 6
    confluence_words: int = 500
    confluence_length: int = 10
    relation_pairs: int = 50
    oracle_tolerance: float = 1e-9


@dataclass(frozen=True)
class RunConfig:
    k: int = 2
    l: int = 3
    d: int = 2
    q: float = 0.5
    N: int = 300
    seed: int = 42
    format: str = 'text'
    out: Optional[str] = None
    closed_form: bool = False
    max_terms: int = 1000000
    threads: Optional[int] = None
    sphere: SphereSettings = field(default_factory=SphereSettings)
    certification: CertificationSettings = field(default_factory=CertificationSettings)

    def __post_init__(self):
        if self.k < 1 or self.l < 1:
            raise UsageError(f"Invalid weights: k={self.k}, l={self.l} (must be >= 1)")
        if gcd(self.k, self.l) != 1:
            raise UsageError(f"Weights k={self.k} and l={self.l} are not coprime")
        if self.d < 1:
            raise UsageError(f"Invalid lens level: d={self.d} (must be >= 1)")
        if not 0 < self.q < 1:
            raise UsageError(f"Invalid q: {self.q} (must be in (0, 1))")
        if self.N < MIN_RUN_DIMENSION:
            raise UsageError(f"Invalid dimension: {self.N} (must be >= {MIN_RUN_DIMENSION})")
        if self.format not in ('text', 'json'):
            raise UsageError(f"Invalid format: {self.format} (must be text or json)")

    @classmethod
    def from_sources(cls, config: Mapping[str, Any], flags: Optional[Mapping[str, Any]] = None) -> 'RunConfig':
        """
        Merge the loaded configuration with flags; flags that are not None win.

        The worker cap comes from QNC_THREADS.

        Raises:
            UsageError: if the merged values break a run invariant or
                QNC_THREADS is malformed
        """
        run = dict(config.get('run', {}))
        for flag, key in FLAG_KEYS.items():
            value = (flags or {}).get(flag)
            if value is not None:
                run[key] = value
        sphere = {k: v for k, v in config.get('sphere', {}).items()
                  if k in SphereSettings.__dataclass_fields__}
        return cls(
            k=run.get('k', cls.k),
            l=run.get('l', cls.l),
            d=run.get('d', cls.d),
            q=float(run.get('q', cls.q)),
            N=run.get('dim', cls.N),
            seed=run.get('seed', cls.seed),
            format=run.get('format', cls.format),
            out=run.get('out'),
            closed_form=bool((flags or {}).get('closed_form', False)),
            max_terms=config.get('ncalg', {}).get('max_terms', cls.max_terms),
            threads=threads_from_env(),
            sphere=SphereSettings(**sphere),
            certification=CertificationSettings.from_config(config),
        )

    def echo(self) -> Dict[str, Any]:
        """Configuration as recorded in reports."""
        return {
            'k': self.k, 'l': self.l, 'd': self.d, 'q': self.q, 'N': self.N,
            'seed': self.seed, 'closed_form': self.closed_form,
            'sphere': asdict(self.sphere),
            'certification': asdict(self.certification),
        }
