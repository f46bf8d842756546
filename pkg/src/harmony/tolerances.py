from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds used across the package.

    Relative thresholds are scaled by ``max(1, ||m||_F)`` where a matrix is
    involved.
    """

    hermitian: float = 1e-9
    psd: float = 1e-9
    trace: float = 1e-9
    reconstruction: float = 1e-8
    norm: float = 1e-10
    imag_residue: float = 1e-9
    spectrum_imag: float = 1e-8
    spectrum_neg: float = 1e-8
    cross_form: float = 1e-10
    purity: float = 1e-9
    rank_cutoff: float = 1e-13

    def with_overrides(self, **kw) -> "Tolerances":
        known = {f.name for f in fields(self)}
        bad = set(kw) - known
        if bad:
            raise KeyError(f"unknown tolerance(s): {', '.join(sorted(bad))}")
        return replace(self, **{k: float(v) for k, v in kw.items()})

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


DEFAULT = Tolerances()
