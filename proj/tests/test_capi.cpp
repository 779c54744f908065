#include <hjbfit.h>

#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <string>

namespace {

std::string temp_out(const char* tag) {
    auto p = std::filesystem::temp_directory_path() / (std::string("hjbfit_capi_") + tag);
    std::filesystem::remove_all(p);
    return p.string();
}

} // namespace

TEST_CASE("c api rejects bad configs with messages") {
    hjbfit_config* cfg = nullptr;
    CHECK(hjbfit_config_from_json("{nope", &cfg) == HJBFIT_ERR_CONFIG);
    CHECK(std::strlen(hjbfit_last_error()) > 0);
    CHECK(hjbfit_config_from_json(nullptr, &cfg) == HJBFIT_ERR_ARGUMENT);
    CHECK(hjbfit_config_from_file("/does/not/exist.json", &cfg) == HJBFIT_ERR_CONFIG);
    CHECK(hjbfit_config_from_json(R"({"scheme":"bogus"})", &cfg) == HJBFIT_ERR_CONFIG);
}

TEST_CASE("c api runs a small experiment end to end") {
    const std::string out = temp_out("run");
    const std::string json =
        R"({"problem":"smoke","params":{"dim":2,"intervals":4},"time_steps":[3,6],
            "control_samples":1,"wall_clock":false,"output_dir":")" +
        out + "\"}";

    hjbfit_config* cfg = nullptr;
    REQUIRE(hjbfit_config_from_json(json.c_str(), &cfg) == HJBFIT_OK);
    hjbfit_result* res = nullptr;
    REQUIRE(hjbfit_run(cfg, &res) == HJBFIT_OK);

    CHECK(hjbfit_result_row_count(res) == 2);
    hjbfit_error_row row{};
    REQUIRE(hjbfit_result_row(res, 0, &row) == HJBFIT_OK);
    CHECK(std::string(row.scheme) == "fitted");
    CHECK(row.n1 == 4);
    CHECK(row.n2 == 4);
    CHECK(row.n3 == 0);
    CHECK(row.time_steps == 3);
    CHECK(row.l2_error >= 0.0);
    CHECK(row.wall_ms == 0.0);
    CHECK(hjbfit_result_row(res, 9, &row) == HJBFIT_ERR_ARGUMENT);
    CHECK(std::strlen(hjbfit_result_summary(res)) > 0);

    hjbfit_result_free(res);

    // convergence over the same config produces an order entry
    res = nullptr;
    REQUIRE(hjbfit_convergence(cfg, &res) == HJBFIT_OK);
    CHECK(hjbfit_result_order_count(res) == 1);
    const char* scheme = nullptr;
    double slope = 0.0;
    REQUIRE(hjbfit_result_order(res, 0, &scheme, &slope) == HJBFIT_OK);
    CHECK(std::string(scheme) == "fitted");
    CHECK(slope > 0.5);
    hjbfit_result_free(res);

    hjbfit_config_free(cfg);
    std::filesystem::remove_all(out);
}

TEST_CASE("c api validate surfaces the coefficient report") {
    hjbfit_config* cfg = nullptr;
    REQUIRE(hjbfit_config_from_json(R"({"control_samples":3})", &cfg) == HJBFIT_OK);
    hjbfit_result* res = nullptr;
    REQUIRE(hjbfit_validate(cfg, &res) == HJBFIT_OK);
    CHECK(hjbfit_result_violation_count(res) > 0);
    CHECK(std::strlen(hjbfit_result_violation(res, 0)) > 0);
    CHECK(std::string(hjbfit_result_violation(res, 100000)) == "");
    hjbfit_result_free(res);
    hjbfit_config_free(cfg);
}
