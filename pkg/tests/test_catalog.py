import json
import random
from importlib import resources

import pytest

from tractorswarm.catalog import (
    BatteryModel,
    BomLine,
    Drivetrain,
    DrivetrainError,
    MachineSpec,
    bom_rollup,
    load_machines,
    pack_energy,
)
from tractorswarm.d497 import DomainError, FuelModel


def battery(**kw):
    args = dict(packs_fitted=1, cells_per_pack=4, cell_voltage=12, cell_capacity=220,
                autonomy_per_pack=2.5, swap_duration=0.0, electric_cost_cents_per_hour=272)
    args.update(kw)
    return BatteryModel(**args)


class TestBom:
    def test_table1_totals(self, table1):
        rep = table1.rollup()
        assert rep.computed_total_cents == 2_551_400
        assert rep.declared_total_cents == 2_531_600
        assert rep.total_discrepancy == 198.0

    def test_table1_battery_line(self, table1):
        rep = table1.rollup()
        assert [(d.component, d.product_cents, d.printed_cents) for d in rep.line_discrepancies] == [
            ("Battery Moura 12MS234 12V/220Ah", 140_800, 142_500)
        ]

    def test_consistent_single_line(self):
        rep = bom_rollup([BomLine("x", 1, 10_000, 10_000)], 100.0)
        assert rep.clean
        assert rep.total_discrepancy_cents == 0

    def test_tolerance_one_dollar(self):
        rep = bom_rollup([BomLine("x", 3, 3_333, 10_000)], 100.0)
        assert rep.line_discrepancies == []

    def test_empty(self):
        with pytest.raises(DomainError):
            bom_rollup([], 0)

    def test_quantity_validation(self):
        with pytest.raises(DomainError):
            BomLine("x", 0, 1, 1)

    @pytest.mark.parametrize("seed", range(5))
    def test_permutation_invariant(self, table1, seed):
        lines = list(table1.lines)
        random.Random(seed).shuffle(lines)
        assert bom_rollup(lines, table1.declared_total) == table1.rollup()

    def test_dash_lines_are_lump_sums(self, table1):
        sensing = next(ln for ln in table1.lines if ln.component == "Sensing")
        assert (sensing.quantity, sensing.unit_value_cents, sensing.line_value_cents) == (1, 200_000, 200_000)


class TestPackEnergy:
    def test_trse_pack(self):
        assert pack_energy(battery()) == pytest.approx(10.56)

    def test_single_cell(self):
        assert pack_energy(battery(cells_per_pack=1, cell_capacity=100)) == pytest.approx(1.2)

    def test_empty_cells(self):
        assert pack_energy(battery(cells_per_pack=7, cell_voltage=6, cell_capacity=0)) == 0


class TestMachines:
    def test_golden_catalog(self, jd, trse):
        assert (jd.rated_power, jd.max_power, jd.mass, jd.transfer_efficiency, jd.purchase_price) == (
            272, 300, 19_805, 0.539, 355_400)
        assert jd.fuel == FuelModel(1.0, 2)
        assert (trse.rated_power, trse.mass, trse.transfer_efficiency, trse.purchase_price) == (20, 700, 0.764, 25_316)
        b = trse.battery
        assert (b.cells_per_pack, b.cell_voltage, b.cell_capacity, b.autonomy_per_pack) == (4, 12, 220, 2.5)
        assert b.electric_cost_per_hour == 2.72

    def test_catalog_file_round_trip(self):
        raw = json.loads(resources.files("tractorswarm.data").joinpath("machines.json").read_text())
        m = load_machines()
        for name, d in raw.items():
            assert m[name].rated_power == d["rated_power_kw"]
            assert m[name].mass == d["mass_kg"]
            assert m[name].purchase_price == d["purchase_price_usd"]

    def test_drivetrain_mismatch(self):
        with pytest.raises(DomainError):
            MachineSpec("x", Drivetrain.DIESEL_MECHANICAL, 10, 100, 0.5, 0, battery=battery())
        with pytest.raises(DomainError):
            MachineSpec("x", Drivetrain.ELECTRIC_TRACKED, 10, 100, 0.5, 0, fuel=FuelModel())

    def test_require(self, jd, trse):
        with pytest.raises(DrivetrainError):
            jd.require_battery()
        with pytest.raises(DrivetrainError):
            trse.require_fuel()

    @pytest.mark.parametrize("kw", [{"rated_power": 0}, {"mass": -1}, {"transfer_efficiency": 1.2}])
    def test_invariants(self, kw):
        args = dict(name="x", drivetrain=Drivetrain.DIESEL_MECHANICAL, rated_power=10, mass=100,
                    transfer_efficiency=0.5, purchase_price=0, fuel=FuelModel())
        args.update(kw)
        with pytest.raises(DomainError):
            MachineSpec(**args)
