import pytest
from pydantic import ValidationError

from sockopt.app.settings import CatalogueConfig
from sockopt.catalogue.generate import build_catalogue, generate_catalogue
from sockopt.catalogue.io import format_catalogue, load_catalogue, parse_catalogue, write_catalogue
from sockopt.catalogue.models import Catalogue, SockDesign
from sockopt.errors import CatalogueParseError, InvalidInputError

SIZES = (32, 13, 3)


class TestGenerateCatalogue:
    def test_degenerate_spec(self):
        spec = CatalogueConfig(n_designs=1, feature_sizes=(2,), price_min=5, price_max=5, alpha=1.0, seed=0)
        (design,) = generate_catalogue(spec)
        assert design.price == 5
        assert design.eco == 5.0
        assert design.features[0] in (0, 1)

    def test_reference_feature_space(self):
        spec = CatalogueConfig(n_designs=10, feature_sizes=SIZES, seed=4)
        designs = generate_catalogue(spec)
        assert len(designs) == 10
        for d in designs:
            assert all(0 <= v < m for v, m in zip(d.features, SIZES, strict=True))
        assert len({d.features for d in designs}) == 10

    def test_same_seed_same_catalogue(self):
        spec = CatalogueConfig(n_designs=50, feature_sizes=SIZES, price_min=5, price_max=15, seed=9)
        assert generate_catalogue(spec) == generate_catalogue(spec)

    def test_prices_in_range_and_eco_proportional(self):
        spec = CatalogueConfig(n_designs=200, feature_sizes=SIZES, price_min=5, price_max=15, alpha=0.3, seed=1)
        for d in generate_catalogue(spec):
            assert 5 <= d.price <= 15
            assert d.eco == pytest.approx(0.3 * d.price, abs=1e-12)

    def test_impossible_distinct_request(self):
        spec = CatalogueConfig(n_designs=7, feature_sizes=(2, 3), distinct="always", seed=0)
        with pytest.raises(InvalidInputError):
            generate_catalogue(spec)

    def test_auto_falls_back_to_replacement(self):
        spec = CatalogueConfig(n_designs=20, feature_sizes=(2, 2), seed=0)
        assert len(generate_catalogue(spec)) == 20

    def test_generator_without_seed_is_rejected(self):
        with pytest.raises(InvalidInputError):
            generate_catalogue(CatalogueConfig(n_designs=3, feature_sizes=(2,)))

    @pytest.mark.parametrize(
        "fields",
        [
            {"n_designs": 0},
            {"feature_sizes": ()},
            {"price_min": 9, "price_max": 3},
        ],
    )
    def test_invalid_specs(self, fields):
        with pytest.raises(ValidationError):
            CatalogueConfig(**fields)


class TestCatalogueModel:
    def test_arrays_mirror_designs(self, small_catalogue: Catalogue):
        assert small_catalogue.features.shape == (24, 3)
        assert small_catalogue.prices.tolist() == [d.price for d in small_catalogue]
        assert small_catalogue.index_of(small_catalogue[5].design_id) == 5

    def test_arrays_are_read_only(self, small_catalogue: Catalogue):
        with pytest.raises(ValueError):
            small_catalogue.prices[0] = 99

    def test_duplicate_ids_are_rejected(self):
        d = SockDesign(design_id="x", features=(0,), price=1, eco=1.0)
        with pytest.raises(InvalidInputError):
            Catalogue.from_designs([d, d], (2,))


class TestCatalogueFiles:
    HEADER = "design_id,f1,f2,f3,price\n"

    def test_header_only_is_empty(self):
        assert parse_catalogue(self.HEADER, SIZES) == []

    def test_row_maps_fields(self):
        (design,) = parse_catalogue(self.HEADER + "d1,0,0,0,10\n", SIZES, alpha=1.0)
        assert design.design_id == "d1"
        assert design.features == (0, 0, 0)
        assert design.price == 10
        assert design.eco == 10.0

    def test_out_of_range_feature_names_line(self):
        text = self.HEADER + "d1,0,0,0,10\nd2,32,0,0,4\n"
        with pytest.raises(CatalogueParseError) as info:
            parse_catalogue(text, SIZES, path="cat.csv")
        assert info.value.line == 3
        assert "cat.csv:3" in str(info.value)

    def test_duplicate_id_names_line(self):
        text = self.HEADER + "d1,0,0,0,10\nd1,1,0,0,4\n"
        with pytest.raises(CatalogueParseError) as info:
            parse_catalogue(text, SIZES)
        assert info.value.line == 3

    @pytest.mark.parametrize(
        "body",
        [
            "d1,0,0,10\n",  # missing column
            "d1,0,x,0,10\n",  # non-numeric feature
            ",0,0,0,10\n",  # empty id
        ],
    )
    def test_malformed_rows(self, body):
        with pytest.raises(CatalogueParseError):
            parse_catalogue(self.HEADER + body, SIZES)

    def test_wrong_header(self):
        with pytest.raises(CatalogueParseError):
            parse_catalogue("id,f1,f2,f3,price\n", SIZES)

    def test_optional_columns_override_defaults(self):
        text = "design_id,f1,f2,f3,price,eco,theta,d\nd1,0,0,0,10,2.5,30,0.1\nd2,1,0,0,4,,,\n"
        first, second = parse_catalogue(text, SIZES, alpha=1.0)
        assert (first.eco, first.theta, first.d) == (2.5, 30, 0.1)
        assert (second.eco, second.theta, second.d) == (4.0, None, None)

    def test_written_file_reads_back(self, tmp_path, small_catalogue: Catalogue):
        path = write_catalogue(small_catalogue.designs, tmp_path / "cat.csv", alpha=1.0)
        assert load_catalogue(path, small_catalogue.feature_sizes, alpha=1.0) == list(small_catalogue.designs)
        assert "eco" not in path.read_text().splitlines()[0]

    def test_format_is_deterministic(self, small_catalogue: Catalogue):
        assert format_catalogue(small_catalogue.designs) == format_catalogue(small_catalogue.designs)

    def test_missing_file_is_a_parse_error(self, tmp_path):
        with pytest.raises(CatalogueParseError):
            load_catalogue(tmp_path / "nope.csv", SIZES)

    def test_build_catalogue_prefers_path(self, tmp_path, small_catalogue: Catalogue, small_catalogue_config):
        path = write_catalogue(small_catalogue.designs[:5], tmp_path / "cat.csv", alpha=1.0)
        loaded = build_catalogue(small_catalogue_config.model_copy(update={"path": str(path)}))
        assert len(loaded) == 5

    def test_undecodable_byte_is_a_parse_error(self, tmp_path):
        path = tmp_path / "cat.csv"
        path.write_bytes(self.HEADER.encode() + b"d1,0,0,0,10\nd\xff2,1,0,0,4\n")
        with pytest.raises(CatalogueParseError, match="not UTF-8") as info:
            load_catalogue(path, SIZES)
        assert info.value.line == 3

    def test_short_row_names_line(self):
        with pytest.raises(CatalogueParseError, match="expected 5 fields, found 3") as info:
            parse_catalogue(self.HEADER + "d1,0,0,0,10\nd2,0,0\n", SIZES)
        assert info.value.line == 3

    def test_extra_field_is_rejected(self):
        with pytest.raises(CatalogueParseError, match="fields"):
            parse_catalogue(self.HEADER + "d1,0,0,0,10,7\n", SIZES)

    def test_blank_lines_keep_line_numbers(self):
        text = self.HEADER + "d1,0,0,0,10\n\nd2,32,0,0,4\n"
        with pytest.raises(CatalogueParseError) as info:
            parse_catalogue(text, SIZES)
        assert info.value.line == 4
        assert len(parse_catalogue(self.HEADER + "d1,0,0,0,10\n\nd2,1,0,0,4\n", SIZES)) == 2

    @pytest.mark.parametrize("price", ["9.5", "", "ten"])
    def test_price_must_be_an_integer(self, price):
        with pytest.raises(CatalogueParseError, match="column price"):
            parse_catalogue(self.HEADER + f"d1,0,0,0,{price}\n", SIZES)

    def test_quoted_ids_survive_a_write(self, tmp_path):
        design = SockDesign(design_id="red, striped", features=(1, 2, 0), price=7, eco=7.0, d=0.25)
        path = write_catalogue([design], tmp_path / "cat.csv", alpha=1.0)
        assert path.read_text() == 'design_id,f1,f2,f3,price,d\n"red, striped",1,2,0,7,0.25\n'
        assert load_catalogue(path, SIZES) == [design]
