#include "miabplan/scenario_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "miabplan/version.hpp"

namespace miab {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw SchemaError(path + ": " + what);
}

void require_object(const json& j, const std::string& path) {
    if (!j.is_object()) {
        fail(path, "expected an object");
    }
}

// Strict field access: every loader lists its known keys and rejects the rest.
void reject_unknown(const json& j, const std::string& path, const std::set<std::string>& known) {
    for (const auto& [key, value] : j.items()) {
        if (!known.contains(key)) {
            fail(path + "/" + key, "unknown field");
        }
    }
}

double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) {
        fail(path, "expected a number");
    }
    return j.get<double>();
}

double get_finite(const json& j, const std::string& path) {
    const double v = get_number(j, path);
    if (!std::isfinite(v)) {
        fail(path, "value must be finite");
    }
    return v;
}

int get_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) {
        fail(path, "expected an integer");
    }
    return j.get<int>();
}

std::uint64_t get_u64(const json& j, const std::string& path) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
        fail(path, "expected a non-negative integer");
    }
    return j.get<std::uint64_t>();
}

bool get_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) {
        fail(path, "expected a boolean");
    }
    return j.get<bool>();
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) {
        fail(path, "expected a string");
    }
    return j.get<std::string>();
}

Point3 get_xy(const json& j, const std::string& path, double z) {
    require_object(j, path);
    reject_unknown(j, path, {"x", "y"});
    if (!j.contains("x") || !j.contains("y")) {
        fail(path, "requires fields x and y");
    }
    return {get_finite(j.at("x"), path + "/x"), get_finite(j.at("y"), path + "/y"), z};
}

SchedulerKind scheduler_from_string(const std::string& s, const std::string& path) {
    if (s == "PF") {
        return SchedulerKind::pf;
    }
    if (s == "RR") {
        return SchedulerKind::rr;
    }
    fail(path, "scheduler must be \"PF\" or \"RR\"");
}

const char* scheduler_name(SchedulerKind kind) {
    return kind == SchedulerKind::pf ? "PF" : "RR";
}

AreaPolygon area_from_json(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) {
        fail(path, "expected a non-empty array of [a, b, c] half-planes");
    }
    std::vector<AreaPolygon::HalfPlane> half_planes;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const json& hp = j.at(i);
        const std::string hp_path = path + "/" + std::to_string(i);
        if (!hp.is_array() || hp.size() != 3) {
            fail(hp_path, "expected [a, b, c] with a*x + b*y <= c");
        }
        half_planes.push_back({get_finite(hp.at(0), hp_path + "/0"),
                               get_finite(hp.at(1), hp_path + "/1"),
                               get_finite(hp.at(2), hp_path + "/2")});
    }
    try {
        return AreaPolygon(std::move(half_planes));
    } catch (const std::invalid_argument& ex) {
        fail(path, ex.what());
    }
}

std::vector<NamedArea> areas_from_json(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) {
        fail(path, "expected a non-empty array of areas");
    }
    std::vector<NamedArea> areas;
    std::set<std::string> ids;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const json& area = j.at(i);
        const std::string area_path = path + "/" + std::to_string(i);
        require_object(area, area_path);
        reject_unknown(area, area_path, {"id", "half_planes"});
        if (!area.contains("id") || !area.contains("half_planes")) {
            fail(area_path, "requires fields id and half_planes");
        }
        const std::string id = get_string(area.at("id"), area_path + "/id");
        if (!ids.insert(id).second) {
            fail(area_path + "/id", "duplicate area id " + id);
        }
        areas.push_back({id, area_from_json(area.at("half_planes"), area_path + "/half_planes")});
    }
    return areas;
}

json areas_to_json(const std::vector<NamedArea>& areas) {
    json out = json::array();
    for (const NamedArea& area : areas) {
        json hp = json::array();
        for (const auto& h : area.polygon.half_planes()) {
            hp.push_back({h.a, h.b, h.c});
        }
        out.push_back({{"id", area.id}, {"half_planes", hp}});
    }
    return out;
}

Cuboid obstacle_from_json(const json& j, const std::string& path) {
    require_object(j, path);
    reject_unknown(j, path, {"vertices", "box"});
    if (j.contains("vertices") == j.contains("box")) {
        fail(path, "requires exactly one of vertices or box");
    }
    try {
        if (j.contains("box")) {
            const json& box = j.at("box");
            if (!box.is_array() || box.size() != 6) {
                fail(path + "/box", "expected [xmin, ymin, zmin, xmax, ymax, zmax]");
            }
            std::array<double, 6> b{};
            for (int i = 0; i < 6; ++i) {
                b[i] = get_finite(box.at(i), path + "/box/" + std::to_string(i));
            }
            return Cuboid::axis_aligned({b[0], b[1], b[2]}, {b[3], b[4], b[5]});
        }
        const json& verts = j.at("vertices");
        if (!verts.is_array() || verts.size() != 8) {
            fail(path + "/vertices", "expected exactly 8 [x, y, z] vertices");
        }
        std::array<Point3, 8> points{};
        for (int i = 0; i < 8; ++i) {
            const json& v = verts.at(i);
            const std::string v_path = path + "/vertices/" + std::to_string(i);
            if (!v.is_array() || v.size() != 3) {
                fail(v_path, "expected [x, y, z]");
            }
            points[i] = {get_finite(v.at(0), v_path + "/0"), get_finite(v.at(1), v_path + "/1"),
                         get_finite(v.at(2), v_path + "/2")};
        }
        return Cuboid(points);
    } catch (const std::invalid_argument& ex) {
        fail(path, ex.what());
    }
}

json obstacle_to_json(const Cuboid& obstacle) {
    json verts = json::array();
    for (const Point3& v : obstacle.vertices()) {
        verts.push_back({v.x, v.y, v.z});
    }
    return {{"vertices", verts}};
}

RadioParams radio_from_json(const json& j, const std::string& path) {
    RadioParams radio;
    require_object(j, path);
    reject_unknown(j, path,
                   {"pt_dbm", "mu", "rb_per_slot", "subcarriers_per_rb", "scs_base_hz",
                    "noise_exponent", "q_rxlevmin_dbm", "se_slope", "se_intercept", "se_max",
                    "f_miab_ghz", "f_fiab_ghz", "h_miab_m", "h_fiab_m", "h_ut_m", "h_e_m"});
    auto number = [&](const char* key, double& slot) {
        if (j.contains(key)) {
            slot = get_finite(j.at(key), path + "/" + key);
        }
    };
    number("pt_dbm", radio.pt_dbm);
    if (j.contains("mu")) {
        radio.mu = get_int(j.at("mu"), path + "/mu");
    }
    if (j.contains("rb_per_slot")) {
        radio.rb_per_slot = get_int(j.at("rb_per_slot"), path + "/rb_per_slot");
    }
    if (j.contains("subcarriers_per_rb")) {
        radio.subcarriers_per_rb = get_int(j.at("subcarriers_per_rb"), path + "/subcarriers_per_rb");
    }
    number("scs_base_hz", radio.scs_base_hz);
    number("noise_exponent", radio.noise_exponent);
    number("q_rxlevmin_dbm", radio.q_rxlevmin_dbm);
    number("se_slope", radio.se_slope);
    number("se_intercept", radio.se_intercept);
    number("se_max", radio.se_max);
    number("f_miab_ghz", radio.f_miab_ghz);
    number("f_fiab_ghz", radio.f_fiab_ghz);
    number("h_miab_m", radio.h_miab_m);
    number("h_fiab_m", radio.h_fiab_m);
    number("h_ut_m", radio.h_ut_m);
    number("h_e_m", radio.h_e_m);
    try {
        radio.validate();
    } catch (const std::invalid_argument& ex) {
        fail(path, ex.what());
    }
    return radio;
}

json radio_to_json(const RadioParams& radio) {
    return {{"pt_dbm", radio.pt_dbm},
            {"mu", radio.mu},
            {"rb_per_slot", radio.rb_per_slot},
            {"subcarriers_per_rb", radio.subcarriers_per_rb},
            {"scs_base_hz", radio.scs_base_hz},
            {"noise_exponent", radio.noise_exponent},
            {"q_rxlevmin_dbm", radio.q_rxlevmin_dbm},
            {"se_slope", radio.se_slope},
            {"se_intercept", radio.se_intercept},
            {"se_max", radio.se_max},
            {"f_miab_ghz", radio.f_miab_ghz},
            {"f_fiab_ghz", radio.f_fiab_ghz},
            {"h_miab_m", radio.h_miab_m},
            {"h_fiab_m", radio.h_fiab_m},
            {"h_ut_m", radio.h_ut_m},
            {"h_e_m", radio.h_e_m}};
}

CellRef cell_from_string(const std::string& s, const std::string& path) {
    if (s.size() < 2 || (s[0] != 'M' && s[0] != 'F')) {
        fail(path, "cell must look like M<index> or F<index>, got \"" + s + "\"");
    }
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
            fail(path, "cell must look like M<index> or F<index>, got \"" + s + "\"");
        }
    }
    CellRef cell;
    cell.kind = s[0] == 'M' ? CellRef::Kind::miab : CellRef::Kind::fiab;
    cell.index = std::stoi(s.substr(1));
    return cell;
}

GaConfig ga_from_json(const json& j, const std::string& path) {
    GaConfig ga;
    require_object(j, path);
    reject_unknown(j, path,
                   {"population_size", "mutation_rate", "crossover_rate", "generations",
                    "elite_count", "penalty_weight"});
    if (j.contains("population_size")) {
        ga.population_size = get_int(j.at("population_size"), path + "/population_size");
    }
    if (j.contains("mutation_rate")) {
        ga.mutation_rate = get_finite(j.at("mutation_rate"), path + "/mutation_rate");
    }
    if (j.contains("crossover_rate")) {
        ga.crossover_rate = get_finite(j.at("crossover_rate"), path + "/crossover_rate");
    }
    if (j.contains("generations")) {
        ga.generations = get_int(j.at("generations"), path + "/generations");
    }
    if (j.contains("elite_count")) {
        ga.elite_count = get_int(j.at("elite_count"), path + "/elite_count");
    }
    if (j.contains("penalty_weight") && !j.at("penalty_weight").is_null()) {
        ga.penalty_weight = get_finite(j.at("penalty_weight"), path + "/penalty_weight");
    }
    try {
        ga.validate();
    } catch (const std::invalid_argument& ex) {
        fail(path, ex.what());
    }
    return ga;
}

json ga_to_json(const GaConfig& ga) {
    json out = {{"population_size", ga.population_size},
                {"mutation_rate", ga.mutation_rate},
                {"crossover_rate", ga.crossover_rate},
                {"generations", ga.generations},
                {"elite_count", ga.elite_count}};
    if (ga.penalty_weight.has_value()) {
        out["penalty_weight"] = *ga.penalty_weight;
    }
    return out;
}

json budget_to_json(const LinkReport& report) {
    json out = {{"d2d_m", report.d2d_m},
                {"range_ok", report.range_ok},
                {"capacity_bps", report.capacity_bps}};
    if (report.budget.has_value()) {
        const LinkBudget& b = *report.budget;
        out["los"] = b.los == LosClass::los ? "LoS" : "NLoS";
        out["pl_db"] = b.pl_db;
        out["rsrp_dbm"] = b.rsrp_dbm;
        out["sinr_db"] = b.sinr_db;
        out["se"] = b.se;
        out["above_rsrp_floor"] = b.above_rsrp_floor;
    }
    return out;
}

std::string csv_escape(const std::string& value) {
    if (value.find_first_of(",\"\n") == std::string::npos) {
        return value;
    }
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream stream(path, std::ios::binary);
    if (!stream) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    stream << content;
    if (!stream) {
        throw std::runtime_error("write failed: " + path);
    }
}

}  // namespace

Scenario scenario_from_json(const json& doc) {
    require_object(doc, "");
    reject_unknown(doc, "", {"areas", "fiabs", "miab_count", "ues", "special_team", "obstacles",
                             "radio", "scheduler", "deployment_area"});
    for (const char* key : {"areas", "fiabs", "ues", "special_team", "scheduler",
                            "deployment_area"}) {
        if (!doc.contains(key)) {
            fail(std::string("/") + key, "required field missing");
        }
    }

    Scenario scenario;
    scenario.areas = areas_from_json(doc.at("areas"), "/areas");
    scenario.radio = doc.contains("radio") ? radio_from_json(doc.at("radio"), "/radio")
                                           : RadioParams{};

    if (!doc.at("fiabs").is_array() || doc.at("fiabs").empty()) {
        fail("/fiabs", "expected a non-empty array");
    }
    for (std::size_t i = 0; i < doc.at("fiabs").size(); ++i) {
        scenario.fiabs.push_back(get_xy(doc.at("fiabs").at(i), "/fiabs/" + std::to_string(i),
                                        scenario.radio.h_fiab_m));
    }

    scenario.miab_count = doc.contains("miab_count")
                              ? get_int(doc.at("miab_count"), "/miab_count")
                              : 0;

    if (!doc.at("ues").is_array() || doc.at("ues").empty()) {
        fail("/ues", "expected a non-empty array");
    }
    for (std::size_t i = 0; i < doc.at("ues").size(); ++i) {
        scenario.ues.push_back(get_xy(doc.at("ues").at(i), "/ues/" + std::to_string(i),
                                      scenario.radio.h_ut_m));
    }

    if (!doc.at("special_team").is_array()) {
        fail("/special_team", "expected an array of UE indices");
    }
    for (std::size_t i = 0; i < doc.at("special_team").size(); ++i) {
        scenario.special_team.push_back(
            get_int(doc.at("special_team").at(i), "/special_team/" + std::to_string(i)));
    }

    if (doc.contains("obstacles")) {
        if (!doc.at("obstacles").is_array()) {
            fail("/obstacles", "expected an array");
        }
        for (std::size_t i = 0; i < doc.at("obstacles").size(); ++i) {
            scenario.obstacles.push_back(
                obstacle_from_json(doc.at("obstacles").at(i), "/obstacles/" + std::to_string(i)));
        }
    }

    scenario.scheduler = scheduler_from_string(get_string(doc.at("scheduler"), "/scheduler"),
                                               "/scheduler");

    const std::string area_id = get_string(doc.at("deployment_area"), "/deployment_area");
    scenario.deployment_area = -1;
    for (std::size_t i = 0; i < scenario.areas.size(); ++i) {
        if (scenario.areas[i].id == area_id) {
            scenario.deployment_area = static_cast<int>(i);
            break;
        }
    }
    if (scenario.deployment_area < 0) {
        fail("/deployment_area", "no area with id " + area_id);
    }

    try {
        scenario.validate();
    } catch (const std::invalid_argument& ex) {
        fail("", ex.what());
    }
    return scenario;
}

json scenario_to_json(const Scenario& scenario) {
    json fiabs = json::array();
    for (const Point3& f : scenario.fiabs) {
        fiabs.push_back({{"x", f.x}, {"y", f.y}});
    }
    json ues = json::array();
    for (const Point3& u : scenario.ues) {
        ues.push_back({{"x", u.x}, {"y", u.y}});
    }
    json obstacles = json::array();
    for (const Cuboid& obs : scenario.obstacles) {
        obstacles.push_back(obstacle_to_json(obs));
    }
    return {{"areas", areas_to_json(scenario.areas)},
            {"fiabs", fiabs},
            {"miab_count", scenario.miab_count},
            {"ues", ues},
            {"special_team", scenario.special_team},
            {"obstacles", obstacles},
            {"radio", radio_to_json(scenario.radio)},
            {"scheduler", scheduler_name(scenario.scheduler)},
            {"deployment_area", scenario.areas.at(scenario.deployment_area).id}};
}

Assignment assignment_from_json(const json& doc, const Scenario& scenario) {
    require_object(doc, "");
    reject_unknown(doc, "", {"miab_xy", "ue_cell", "backhaul_donor"});
    Assignment assignment;

    const json miab_xy = doc.contains("miab_xy") ? doc.at("miab_xy") : json::array();
    if (!miab_xy.is_array() || static_cast<int>(miab_xy.size()) != scenario.miab_count) {
        fail("/miab_xy", "expected " + std::to_string(scenario.miab_count) +
                             " [x, y] positions, got " + std::to_string(miab_xy.size()));
    }
    for (std::size_t m = 0; m < miab_xy.size(); ++m) {
        const json& p = miab_xy.at(m);
        const std::string p_path = "/miab_xy/" + std::to_string(m);
        if (!p.is_array() || p.size() != 2) {
            fail(p_path, "expected [x, y]");
        }
        assignment.miab_xy.push_back(
            {get_finite(p.at(0), p_path + "/0"), get_finite(p.at(1), p_path + "/1")});
    }

    if (!doc.contains("ue_cell")) {
        fail("/ue_cell", "required field missing");
    }
    const json& ue_cell = doc.at("ue_cell");
    if (!ue_cell.is_array() || ue_cell.size() != scenario.ues.size()) {
        fail("/ue_cell", "expected one serving cell per UE (" +
                             std::to_string(scenario.ues.size()) + " entries), got " +
                             std::to_string(ue_cell.size()) +
                             (ue_cell.is_array() && ue_cell.size() < scenario.ues.size()
                                  ? "; first unassigned UE is " + std::to_string(ue_cell.size())
                                  : ""));
    }
    for (std::size_t u = 0; u < ue_cell.size(); ++u) {
        const std::string u_path = "/ue_cell/" + std::to_string(u);
        const CellRef cell = cell_from_string(get_string(ue_cell.at(u), u_path), u_path);
        const int limit = cell.kind == CellRef::Kind::miab ? scenario.miab_count
                                                           : static_cast<int>(scenario.fiabs.size());
        if (cell.index < 0 || cell.index >= limit) {
            fail(u_path, "cell " + cell_ref_name(cell) + " does not exist in this scenario");
        }
        assignment.ue_cell.push_back(cell);
    }

    const json donors = doc.contains("backhaul_donor") ? doc.at("backhaul_donor") : json::array();
    if (!donors.is_array() || static_cast<int>(donors.size()) != scenario.miab_count) {
        fail("/backhaul_donor", "expected one donor per MIAB (" +
                                    std::to_string(scenario.miab_count) + " entries), got " +
                                    std::to_string(donors.size()));
    }
    for (std::size_t m = 0; m < donors.size(); ++m) {
        const std::string d_path = "/backhaul_donor/" + std::to_string(m);
        const CellRef donor = cell_from_string(get_string(donors.at(m), d_path), d_path);
        if (donor.kind != CellRef::Kind::fiab || donor.index < 0 ||
            donor.index >= static_cast<int>(scenario.fiabs.size())) {
            fail(d_path, "donor must be an existing FIAB");
        }
        assignment.backhaul_donor.push_back(donor.index);
    }
    return assignment;
}

json assignment_to_json(const Assignment& assignment) {
    json miab_xy = json::array();
    for (const auto& [x, y] : assignment.miab_xy) {
        miab_xy.push_back({x, y});
    }
    json ue_cell = json::array();
    for (const CellRef& cell : assignment.ue_cell) {
        ue_cell.push_back(cell_ref_name(cell));
    }
    json donors = json::array();
    for (int k : assignment.backhaul_donor) {
        donors.push_back("F" + std::to_string(k));
    }
    return {{"miab_xy", miab_xy}, {"ue_cell", ue_cell}, {"backhaul_donor", donors}};
}

CampaignConfig campaign_config_from_json(const json& doc) {
    require_object(doc, "");
    reject_unknown(doc, "",
                   {"areas", "scenarios_per_area", "ues_total", "special_team_size",
                    "obstacles_per_scenario", "seed", "v1_with_miab", "obstacle", "ga", "radio",
                    "workers"});
    if (!doc.contains("areas")) {
        fail("/areas", "required field missing");
    }
    CampaignConfig config;
    config.areas = areas_from_json(doc.at("areas"), "/areas");
    if (doc.contains("scenarios_per_area")) {
        config.scenarios_per_area = get_int(doc.at("scenarios_per_area"), "/scenarios_per_area");
    }
    if (doc.contains("ues_total")) {
        config.ues_total = get_int(doc.at("ues_total"), "/ues_total");
    }
    if (doc.contains("special_team_size")) {
        config.special_team_size = get_int(doc.at("special_team_size"), "/special_team_size");
    }
    if (doc.contains("obstacles_per_scenario")) {
        config.obstacles_per_scenario =
            get_int(doc.at("obstacles_per_scenario"), "/obstacles_per_scenario");
    }
    if (doc.contains("seed")) {
        config.seed = get_u64(doc.at("seed"), "/seed");
    }
    if (doc.contains("v1_with_miab")) {
        config.v1_with_miab = get_bool(doc.at("v1_with_miab"), "/v1_with_miab");
    }
    if (doc.contains("workers")) {
        config.workers = get_int(doc.at("workers"), "/workers");
    }
    if (doc.contains("obstacle")) {
        const json& obs = doc.at("obstacle");
        require_object(obs, "/obstacle");
        reject_unknown(obs, "/obstacle",
                       {"footprint_min_m", "footprint_max_m", "height_min_m", "height_max_m"});
        if (obs.contains("footprint_min_m")) {
            config.obstacle.footprint_min_m =
                get_finite(obs.at("footprint_min_m"), "/obstacle/footprint_min_m");
        }
        if (obs.contains("footprint_max_m")) {
            config.obstacle.footprint_max_m =
                get_finite(obs.at("footprint_max_m"), "/obstacle/footprint_max_m");
        }
        if (obs.contains("height_min_m")) {
            config.obstacle.height_min_m =
                get_finite(obs.at("height_min_m"), "/obstacle/height_min_m");
        }
        if (obs.contains("height_max_m")) {
            config.obstacle.height_max_m =
                get_finite(obs.at("height_max_m"), "/obstacle/height_max_m");
        }
    }
    if (doc.contains("ga")) {
        config.ga = ga_from_json(doc.at("ga"), "/ga");
    }
    if (doc.contains("radio")) {
        config.radio = radio_from_json(doc.at("radio"), "/radio");
    }
    try {
        config.validate();
    } catch (const std::invalid_argument& ex) {
        fail("", ex.what());
    }
    return config;
}

json campaign_config_to_json(const CampaignConfig& config) {
    // The worker count is an execution detail with no effect on results;
    // leaving it out keeps manifests byte-identical across machines.
    return {{"areas", areas_to_json(config.areas)},
            {"scenarios_per_area", config.scenarios_per_area},
            {"ues_total", config.ues_total},
            {"special_team_size", config.special_team_size},
            {"obstacles_per_scenario", config.obstacles_per_scenario},
            {"seed", config.seed},
            {"v1_with_miab", config.v1_with_miab},
            {"obstacle",
             {{"footprint_min_m", config.obstacle.footprint_min_m},
              {"footprint_max_m", config.obstacle.footprint_max_m},
              {"height_min_m", config.obstacle.height_min_m},
              {"height_max_m", config.obstacle.height_max_m}}},
            {"ga", ga_to_json(config.ga)},
            {"radio", radio_to_json(config.radio)}};
}

json evaluation_to_json(const Scenario& scenario, const Assignment& assignment,
                        const Evaluation& evaluation) {
    json per_ue = json::array();
    for (std::size_t u = 0; u < evaluation.ue_links.size(); ++u) {
        json entry = budget_to_json(evaluation.ue_links[u]);
        entry["ue"] = u;
        entry["cell"] = cell_ref_name(assignment.ue_cell[u]);
        per_ue.push_back(std::move(entry));
    }
    json backhaul = json::array();
    for (std::size_t m = 0; m < evaluation.backhaul_links.size(); ++m) {
        json entry = budget_to_json(evaluation.backhaul_links[m]);
        entry["miab"] = m;
        entry["donor"] = "F" + std::to_string(assignment.backhaul_donor[m]);
        backhaul.push_back(std::move(entry));
    }
    return {{"objective_bps", evaluation.objective_bps},
            {"feasible", evaluation.feasible},
            {"objective_upper_bound_bps", objective_upper_bound(scenario)},
            {"per_ue", per_ue},
            {"backhaul", backhaul},
            {"violations",
             {{"rsrp_deficit_db", evaluation.violations.rsrp_deficit_db},
              {"backhaul_deficit_bps", evaluation.violations.backhaul_deficit_bps},
              {"range_violations", evaluation.violations.range_violations},
              {"area_violation_m", evaluation.violations.area_violation_m}}},
            {"normalized_violation", evaluation.normalized_violation}};
}

json solve_result_to_json(const SolveResult& result) {
    return {{"found_feasible", result.found_feasible},
            {"generations_run", result.generations_run},
            {"evaluations", result.evaluations}};
}

json make_manifest(const std::string& command, const json& resolved_config) {
    return {{"tool_version", kToolVersion}, {"command", command}, {"config", resolved_config}};
}

json load_json_file(const std::string& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) {
        throw SchemaError(path + ": cannot open file");
    }
    json doc;
    try {
        doc = json::parse(stream);
    } catch (const json::parse_error& ex) {
        throw SchemaError(path + ": " + ex.what());
    }
    return doc;
}

Scenario load_scenario(const std::string& path) {
    json doc = load_json_file(path);
    // A previous solve/oracle/evaluate output can be re-run directly.
    if (doc.is_object() && doc.contains("manifest")) {
        const json& config = doc.at("manifest").at("config");
        if (!config.contains("scenario")) {
            throw SchemaError(path + ": manifest carries no scenario");
        }
        doc = config.at("scenario");
    }
    try {
        return scenario_from_json(doc);
    } catch (const SchemaError& ex) {
        throw SchemaError(path + ex.what());
    }
}

Assignment load_assignment(const std::string& path, const Scenario& scenario) {
    json doc = load_json_file(path);
    if (doc.is_object() && doc.contains("manifest") && doc.contains("assignment")) {
        doc = doc.at("assignment");
    }
    try {
        return assignment_from_json(doc, scenario);
    } catch (const SchemaError& ex) {
        throw SchemaError(path + ex.what());
    }
}

CampaignConfig load_campaign_config(const std::string& path) {
    json doc = load_json_file(path);
    // campaign.json from a previous run doubles as the config.
    if (doc.is_object() && doc.contains("manifest")) {
        doc = doc.at("manifest").at("config");
    }
    try {
        return campaign_config_from_json(doc);
    } catch (const SchemaError& ex) {
        throw SchemaError(path + ex.what());
    }
}

std::string g17(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void write_campaign_outputs(const CampaignConfig& config, const CampaignReport& report,
                            const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);

    std::string csv =
        "area,scenario,variant,scheduler,objective_bps,gain_percent,feasible,miab_x,miab_y,"
        "backhaul_capacity_bps,avg_topology_distance_m,inter_distance_m,associations,"
        "solver_seed,solver_generations,solver_evaluations,status\n";
    for (const RunRecord& rec : report.records) {
        csv += csv_escape(rec.area_id);
        csv += ',' + std::to_string(rec.scenario_index);
        csv += ',';
        csv += variant_name(rec.variant);
        csv += ',';
        csv += rec.scheduler.has_value() ? scheduler_name(*rec.scheduler) : "n/a";
        csv += ',' + g17(rec.objective_bps);
        csv += ',';
        if (rec.gain_percent.has_value()) {
            csv += g17(*rec.gain_percent);
        }
        csv += ',';
        csv += rec.feasible ? '1' : '0';
        csv += ',';
        if (rec.miab_xy.has_value()) {
            csv += g17((*rec.miab_xy)[0]);
        }
        csv += ',';
        if (rec.miab_xy.has_value()) {
            csv += g17((*rec.miab_xy)[1]);
        }
        csv += ',';
        if (rec.backhaul_capacity_bps.has_value()) {
            csv += g17(*rec.backhaul_capacity_bps);
        }
        csv += ',' + g17(rec.avg_topology_distance_m);
        csv += ',' + g17(rec.inter_distance_m);
        csv += ',' + csv_escape(rec.associations);
        csv += ',' + std::to_string(rec.solver_seed);
        csv += ',' + std::to_string(rec.solver_generations);
        csv += ',' + std::to_string(rec.solver_evaluations);
        csv += ',' + csv_escape(rec.status) + '\n';
    }
    write_file((dir / "records.csv").string(), csv);

    for (std::size_t vi = 1; vi < kAllVariants.size(); ++vi) {
        const VariantId variant = kAllVariants[vi];
        std::vector<double> gains;
        for (const RunRecord& rec : report.records) {
            if (rec.variant == variant && rec.gain_percent.has_value() && rec.status == "ok") {
                gains.push_back(*rec.gain_percent);
            }
        }
        if (gains.empty()) {
            continue;
        }
        std::string cdf_csv = "gain_percent,cumulative_fraction\n";
        for (const auto& [value, fraction] : empirical_cdf(std::move(gains))) {
            cdf_csv += g17(value) + ',' + g17(fraction) + '\n';
        }
        write_file((dir / (std::string("cdf_") + variant_name(variant) + ".csv")).string(),
                   cdf_csv);
    }

    json summaries = json::object();
    for (const auto& [name, summary] : report.summaries) {
        summaries[name] = {{"gain_count", summary.gain_count},
                           {"min_gain_percent", summary.min_gain},
                           {"median_gain_percent", summary.median_gain},
                           {"p90_gain_percent", summary.p90_gain}};
    }
    int failed = 0;
    for (const RunRecord& rec : report.records) {
        failed += rec.status == "ok" ? 0 : 1;
    }
    const json campaign = {{"manifest", make_manifest("campaign", campaign_config_to_json(config))},
                           {"record_count", report.records.size()},
                           {"failed_records", failed},
                           {"variants", summaries},
                           {"records_csv", "records.csv"}};
    write_file((dir / "campaign.json").string(), campaign.dump(2) + "\n");
}

void write_trace_csv(const SolveResult& result, const std::string& path) {
    std::string csv = "generation,best_fitness,best_objective_bps,feasible_fraction\n";
    for (std::size_t g = 0; g < result.trace.size(); ++g) {
        const GenerationStat& stat = result.trace[g];
        csv += std::to_string(g) + ',' + g17(stat.best_fitness) + ',' +
               g17(stat.best_objective) + ',' + g17(stat.feasible_fraction) + '\n';
    }
    write_file(path, csv);
}

std::string schema_text() {
    static const char* kSchema = R"JSON({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "miabplan documents",
  "definitions": {
    "half_plane": {
      "type": "array", "minItems": 3, "maxItems": 3, "items": {"type": "number"},
      "description": "[a, b, c] meaning a*x + b*y <= c (meters)"
    },
    "area": {
      "type": "object", "additionalProperties": false,
      "required": ["id", "half_planes"],
      "properties": {
        "id": {"type": "string"},
        "half_planes": {"type": "array", "minItems": 1, "items": {"$ref": "#/definitions/half_plane"}}
      }
    },
    "xy": {
      "type": "object", "additionalProperties": false,
      "required": ["x", "y"],
      "properties": {"x": {"type": "number"}, "y": {"type": "number"}}
    },
    "obstacle": {
      "type": "object", "additionalProperties": false,
      "description": "exactly one of vertices (8 x [x,y,z], bottom ring 0-3 then top ring 4-7) or box [xmin,ymin,zmin,xmax,ymax,zmax]",
      "properties": {
        "vertices": {"type": "array", "minItems": 8, "maxItems": 8,
                     "items": {"type": "array", "minItems": 3, "maxItems": 3, "items": {"type": "number"}}},
        "box": {"type": "array", "minItems": 6, "maxItems": 6, "items": {"type": "number"}}
      }
    },
    "radio": {
      "type": "object", "additionalProperties": false,
      "properties": {
        "pt_dbm": {"type": "number"}, "mu": {"type": "integer", "minimum": 0, "maximum": 3},
        "rb_per_slot": {"type": "integer", "minimum": 1},
        "subcarriers_per_rb": {"type": "integer", "minimum": 1},
        "scs_base_hz": {"type": "number"}, "noise_exponent": {"type": "number"},
        "q_rxlevmin_dbm": {"type": "number"}, "se_slope": {"type": "number"},
        "se_intercept": {"type": "number"}, "se_max": {"type": "number"},
        "f_miab_ghz": {"type": "number"}, "f_fiab_ghz": {"type": "number"},
        "h_miab_m": {"type": "number"}, "h_fiab_m": {"type": "number"},
        "h_ut_m": {"type": "number"}, "h_e_m": {"type": "number"}
      }
    },
    "ga": {
      "type": "object", "additionalProperties": false,
      "properties": {
        "population_size": {"type": "integer", "minimum": 2},
        "mutation_rate": {"type": "number", "minimum": 0, "maximum": 1},
        "crossover_rate": {"type": "number", "minimum": 0, "maximum": 1},
        "generations": {"type": "integer", "minimum": 1},
        "elite_count": {"type": "integer", "minimum": 0},
        "penalty_weight": {"type": ["number", "null"]}
      }
    },
    "scenario": {
      "type": "object", "additionalProperties": false,
      "required": ["areas", "fiabs", "ues", "special_team", "scheduler", "deployment_area"],
      "properties": {
        "areas": {"type": "array", "minItems": 1, "items": {"$ref": "#/definitions/area"}},
        "fiabs": {"type": "array", "minItems": 1, "items": {"$ref": "#/definitions/xy"}},
        "miab_count": {"type": "integer", "minimum": 0},
        "ues": {"type": "array", "minItems": 1, "items": {"$ref": "#/definitions/xy"}},
        "special_team": {"type": "array", "minItems": 1, "items": {"type": "integer", "minimum": 0}},
        "obstacles": {"type": "array", "items": {"$ref": "#/definitions/obstacle"}},
        "radio": {"$ref": "#/definitions/radio"},
        "scheduler": {"enum": ["PF", "RR"]},
        "deployment_area": {"type": "string"}
      }
    },
    "assignment": {
      "type": "object", "additionalProperties": false,
      "required": ["ue_cell"],
      "properties": {
        "miab_xy": {"type": "array", "items": {"type": "array", "minItems": 2, "maxItems": 2, "items": {"type": "number"}}},
        "ue_cell": {"type": "array", "items": {"type": "string", "pattern": "^[MF][0-9]+$"}},
        "backhaul_donor": {"type": "array", "items": {"type": "string", "pattern": "^F[0-9]+$"}}
      }
    },
    "campaign_config": {
      "type": "object", "additionalProperties": false,
      "required": ["areas"],
      "properties": {
        "areas": {"type": "array", "minItems": 1, "items": {"$ref": "#/definitions/area"}},
        "scenarios_per_area": {"type": "integer", "minimum": 1},
        "ues_total": {"type": "integer", "minimum": 1},
        "special_team_size": {"type": "integer", "minimum": 1},
        "obstacles_per_scenario": {"type": "integer", "minimum": 0},
        "seed": {"type": "integer", "minimum": 0},
        "v1_with_miab": {"type": "boolean"},
        "workers": {"type": "integer"},
        "obstacle": {
          "type": "object", "additionalProperties": false,
          "properties": {
            "footprint_min_m": {"type": "number"}, "footprint_max_m": {"type": "number"},
            "height_min_m": {"type": "number"}, "height_max_m": {"type": "number"}
          }
        },
        "ga": {"$ref": "#/definitions/ga"},
        "radio": {"$ref": "#/definitions/radio"}
      }
    }
  }
}
)JSON";
    return kSchema;
}

}  // namespace miab
