// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "fhsplit/config.hpp"
#include "fhsplit/emulation.hpp"
#include "fhsplit/report.hpp"
#include "fhsplit/scenario.hpp"
#include "fhsplit/split_models.hpp"
#include "fhsplit/wire.hpp"

namespace fhsplit::cli {
namespace {

using json = nlohmann::ordered_json;

// Raised for bad flag combinations and values that CLI11 cannot check.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::string fixed(double v, int decimals)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

// Exact ratio rounded half-up to one decimal.
std::string one_decimal(const Rational& r)
{
    std::uint64_t tenths = (r * Rational(10)).round_half_up();
    return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

CellConfig resolve_cell(const std::string& config, const std::string& preset)
{
    if (!config.empty() && !preset.empty()) {
        throw UsageError("--config and --preset are mutually exclusive");
    }
    if (!config.empty()) return load_cell_config(config);
    return preset_config(preset.empty() ? "lte10" : preset);
}

// ---- plan ----------------------------------------------------------------

struct PlanArgs {
    std::string config;
    std::string preset;
    std::string format = "plain";
};

int cmd_plan(const PlanArgs& a, std::ostream& out)
{
    const CellConfig cfg = resolve_cell(a.config, a.preset);

    std::vector<std::string> notes;
    notes.push_back("Option 8 is the 7.1 rate scaled by the oversampling factor " +
                    cfg.oversampling_factor().to_string() +
                    (cfg.n_fft() ? " (n_fft / n_sc)." : "."));
    const BitRate opt8 = rate_option8(cfg);
    if (opt8.mbps_tenths() == 73'544) {
        notes.push_back("7357.4 Mbit/s is sometimes quoted for Option 8 at 20 MHz; "
                        "the formula gives 7354.4 Mbit/s, consistent with the other rows.");
    }

    if (a.format == "csv") {
        out << "split,direction,rate_mbps,rate_bps\n";
        for (SplitOption s : kAllSplits) {
            BitRate r = split_rate(cfg, s);
            out << split_label(s) << ',' << split_direction(s) << ',' << r.mbps_display() << ','
                << r.exact().to_string() << '\n';
        }
    } else if (a.format == "json") {
        json j;
        j["config"] = to_key_values(cfg);
        j["rows"] = json::array();
        for (SplitOption s : kAllSplits) {
            BitRate r = split_rate(cfg, s);
            j["rows"].push_back({{"split", split_label(s)},
                                 {"direction", split_direction(s)},
                                 {"rate_mbps", r.mbps_display()},
                                 {"rate_bps", r.exact().to_string()}});
        }
        j["notes"] = notes;
        out << j.dump(2) << '\n';
    } else {
        out << "Required fronthaul capacity (" << fixed(cfg.bw_mhz(), 1) << " MHz, " << cfg.n_sc()
            << " subcarriers, " << cfg.n_layers() << " layers, " << cfg.n_ant() << " antenna ports, "
            << scheme_name(cfg.modulation()) << ", Sbw " << cfg.soft_bit_width() << ")\n\n";
        out << std::left << std::setw(8) << "split" << std::setw(11) << "direction" << std::right
            << std::setw(12) << "Mbit/s" << '\n';
        for (SplitOption s : kAllSplits) {
            BitRate r = split_rate(cfg, s);
            out << std::left << std::setw(8)
                << (std::string(split_label(s)) + (s == SplitOption::Option8 ? "*" : ""))
                << std::setw(11) << split_direction(s) << std::right << std::setw(12)
                << r.mbps_display() << '\n';
        }
        out << '\n';
        for (std::size_t i = 0; i < notes.size(); ++i) {
            out << (i == 0 ? "* " : "  ") << notes[i] << '\n';
        }
    }
    return kExitOk;
}

// ---- compare -------------------------------------------------------------

struct CompareArgs {
    std::vector<unsigned> sbw{4, 8};
    std::vector<unsigned> mods{2, 4, 6, 8};
    unsigned iq = 16;
    std::string format = "plain";
};

int cmd_compare(const CompareArgs& a, std::ostream& out)
{
    if (a.sbw.empty() || a.mods.empty()) {
        throw UsageError("--sbw and --mod need at least one value");
    }
    std::vector<Modulation> mods;
    for (unsigned m : a.mods) mods.push_back(modulation_from_order(m));
    for (unsigned w : a.sbw) {
        if (w < 1 || w > 16) throw ConfigError("sbw", "must be in [1, 16]");
    }
    if (a.iq < 1) throw ConfigError("iq", "must be at least 1");

    struct Row {
        Direction dir;
        Modulation mod;
        unsigned sbw;  // 0 for the downlink
        Rational ratio;
    };
    std::vector<Row> rows;
    for (Modulation m : mods) {
        rows.push_back({Direction::Downlink, m, 0, efficiency_ratio(Direction::Downlink, m, 1, a.iq)});
    }
    for (unsigned w : a.sbw) {
        for (Modulation m : mods) {
            rows.push_back({Direction::Uplink, m, w, efficiency_ratio(Direction::Uplink, m, w, a.iq)});
        }
    }

    if (a.format == "csv") {
        out << "direction,sbw,mod_order,modulation,ratio_exact,ratio,ratio_rounded\n";
        for (const Row& r : rows) {
            out << to_string(r.dir) << ',' << (r.sbw ? std::to_string(r.sbw) : "") << ','
                << bits_per_symbol(r.mod) << ',' << scheme_name(r.mod) << ','
                << r.ratio.to_string() << ',' << fixed(r.ratio.to_double(), 6) << ','
                << one_decimal(r.ratio) << '\n';
        }
    } else if (a.format == "json") {
        json j = json::array();
        for (const Row& r : rows) {
            json row;
            row["direction"] = to_string(r.dir);
            if (r.sbw) row["sbw"] = r.sbw;
            row["mod_order"] = bits_per_symbol(r.mod);
            row["modulation"] = scheme_name(r.mod);
            row["ratio_exact"] = r.ratio.to_string();
            row["ratio"] = r.ratio.to_double();
            row["ratio_rounded"] = one_decimal(r.ratio);
            j.push_back(row);
        }
        out << j.dump(2) << '\n';
    } else {
        out << "Fronthaul efficiency, 7.2 rate / 7.3 rate (IQ " << a.iq << " bits)\n\n";
        out << std::left << std::setw(10) << "" << std::right << std::setw(8) << "DL";
        for (unsigned w : a.sbw) out << std::setw(12) << ("UL Sbw=" + std::to_string(w));
        out << '\n';
        for (std::size_t i = 0; i < mods.size(); ++i) {
            out << std::left << std::setw(10) << scheme_name(mods[i]) << std::right << std::setw(8)
                << one_decimal(rows[i].ratio);
            for (std::size_t k = 0; k < a.sbw.size(); ++k) {
                out << std::setw(12) << one_decimal(rows[mods.size() * (k + 1) + i].ratio);
            }
            out << '\n';
        }
    }
    return kExitOk;
}

// ---- budget --------------------------------------------------------------

struct BudgetArgs {
    std::string direction = "UL";
    double processing_ms = 0.0;
    std::optional<double> fibre_km;
    LinkBudget budget;
    std::string format = "plain";
};

int cmd_budget(const BudgetArgs& a, std::ostream& out)
{
    a.budget.validate();
    const Direction dir = parse_direction(a.direction);
    double km = 0.0;
    try {
        km = max_fronthaul_distance_km(a.budget, dir, a.processing_ms);
    } catch (const std::domain_error& e) {
        throw ConfigError("processing-ms", e.what());
    }
    std::optional<double> delay_us;
    if (a.fibre_km) {
        if (*a.fibre_km < 0.0) throw ConfigError("fibre-km", "must be non-negative");
        delay_us = propagation_delay_us(a.budget, *a.fibre_km);
    }

    if (a.format == "csv") {
        out << "direction,deadline_ms,processing_ms,max_distance_km,fibre_km,delay_us,fits\n";
        out << to_string(dir) << ',' << a.budget.deadline_ms(dir) << ',' << a.processing_ms << ','
            << fixed(km, 3) << ',';
        if (delay_us) {
            out << *a.fibre_km << ',' << fixed(*delay_us, 3) << ',' << (*a.fibre_km <= km ? 1 : 0);
        } else {
            out << ",,";
        }
        out << '\n';
    } else if (a.format == "json") {
        json j;
        j["direction"] = to_string(dir);
        j["deadline_ms"] = a.budget.deadline_ms(dir);
        j["processing_ms"] = a.processing_ms;
        j["max_distance_km"] = km;
        if (delay_us) {
            j["fibre_km"] = *a.fibre_km;
            j["delay_us"] = *delay_us;
            j["fits"] = *a.fibre_km <= km;
        }
        out << j.dump(2) << '\n';
    } else {
        out << to_string(dir) << " deadline " << fixed(a.budget.deadline_ms(dir), 3)
            << " ms, processing " << fixed(a.processing_ms, 3) << " ms\n";
        out << "max fronthaul distance: " << fixed(km, 3) << " km\n";
        if (delay_us) {
            out << "one-way delay over " << fixed(*a.fibre_km, 3) << " km: " << fixed(*delay_us, 3)
                << " us (" << (*a.fibre_km <= km ? "fits" : "exceeds the budget") << ")\n";
        }
    }
    return kExitOk;
}

// ---- header --------------------------------------------------------------

std::string to_hex(std::span<const std::uint8_t> bytes)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string s;
    s.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 0xF]);
    }
    return s;
}

wire::Bytes from_hex(const std::string& text)
{
    std::string digits;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (!std::isxdigit(static_cast<unsigned char>(c))) {
            throw ConfigError("hex", std::string("invalid character '") + c + "'");
        }
        digits.push_back(c);
    }
    if (digits.size() % 2 != 0) throw ConfigError("hex", "odd number of digits");
    wire::Bytes out(digits.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<std::uint8_t>(std::stoul(digits.substr(2 * i, 2), nullptr, 16));
    }
    return out;
}

void print_header(const wire::SplitHeader& h, const std::string& format, std::ostream& out)
{
    if (format == "csv") {
        out << "timestamp,num_blocks,content_type,size,sender_clock\n"
            << h.timestamp << ',' << h.num_blocks << ',' << h.content_type << ',' << h.size << ','
            << h.sender_clock << '\n';
    } else if (format == "json") {
        json j{{"timestamp", h.timestamp},
               {"num_blocks", h.num_blocks},
               {"content_type", h.content_type},
               {"size", h.size},
               {"sender_clock", h.sender_clock}};
        out << j.dump(2) << '\n';
    } else {
        out << "timestamp    " << h.timestamp << '\n'
            << "num_blocks   " << h.num_blocks << '\n'
            << "content_type " << h.content_type << '\n'
            << "size         " << h.size << '\n'
            << "sender_clock " << h.sender_clock << '\n';
    }
}

struct HeaderArgs {
    wire::SplitHeader header;
    std::string hex;
    std::string format = "plain";
};

int cmd_header_encode(const HeaderArgs& a, std::ostream& out)
{
    std::array<std::uint8_t, wire::kHeaderSize> bytes{};
    try {
        bytes = wire::encode_header(a.header);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("header", e.what());
    }
    if (a.format == "json") {
        out << json{{"hex", to_hex(bytes)}}.dump(2) << '\n';
    } else if (a.format == "csv") {
        out << "hex\n" << to_hex(bytes) << '\n';
    } else {
        out << to_hex(bytes) << '\n';
    }
    return kExitOk;
}

int cmd_header_decode(const HeaderArgs& a, std::ostream& out)
{
    wire::Bytes bytes = from_hex(a.hex);
    auto decoded = wire::decode_header(bytes);
    if (const auto* bad = std::get_if<wire::Malformed>(&decoded)) {
        throw ConfigError("header", "malformed (" + std::string(wire::to_string(bad->reason)) + ")");
    }
    print_header(std::get<wire::SplitHeader>(decoded), a.format, out);
    return kExitOk;
}

// ---- emulate -------------------------------------------------------------

struct EmulateArgs {
    std::string config;
    std::string preset;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "emulation-out";
    std::optional<std::string> mode;
    std::optional<std::string> du_addr;
    std::optional<std::string> ru_addr;
    std::string format = "plain";
};

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

EmulationReport run_one(const Scenario& s, std::uint64_t goodput, std::uint64_t seed)
{
    TrafficProfile p = s.traffic;
    p.goodput_bps = goodput;
    if (s.mode == ChannelMode::Socket) {
        UdpChannel channel(s.endpoints);
        return run_emulation(s.cell, p, channel, seed, s.options);
    }
    SimulatedChannel channel(s.impairments, seed);
    return run_emulation(s.cell, p, channel, seed, s.options);
}

double timeout_fraction(const EmulationReport& r)
{
    const std::uint64_t sent = r.dl.messages_sent + r.ul.messages_sent;
    return sent == 0 ? 0.0 : static_cast<double>(r.dl.timeouts + r.ul.timeouts) / static_cast<double>(sent);
}

void print_run_summary(const EmulationReport& r, std::ostream& out)
{
    out << "subframes         " << r.series.size() << '\n'
        << "offered goodput   " << fixed(r.mean_offered_bps() / 1e6, 3) << " Mbit/s\n"
        << "DL fronthaul      " << fixed(r.mean_dl_bps() / 1e6, 3) << " Mbit/s\n"
        << "UL fronthaul      " << fixed(r.mean_ul_bps() / 1e6, 3) << " Mbit/s\n"
        << "completes         " << r.dl.completes + r.ul.completes << '\n'
        << "timeouts          " << r.dl.timeouts + r.ul.timeouts << " ("
        << fixed(100.0 * timeout_fraction(r), 2) << "%)\n"
        << "jumbled           " << r.dl.jumbled + r.ul.jumbled << '\n';
    if (!r.complete) out << "error             " << r.error << '\n';
}

int cmd_emulate(const EmulateArgs& a, std::ostream& out, std::ostream& err)
{
    if (!a.config.empty() && !a.preset.empty()) {
        throw UsageError("--config and --preset are mutually exclusive");
    }
    Scenario s = a.config.empty()
                     ? parse_scenario("preset = " + (a.preset.empty() ? std::string("lte10") : a.preset) +
                                      "\ngoodput_bps = peak\n")
                     : load_scenario(a.config);
    if (a.mode) s.mode = parse_mode(*a.mode);
    if (a.du_addr) s.endpoints.du_addr = *a.du_addr;
    if (a.ru_addr) s.endpoints.ru_addr = *a.ru_addr;
    const std::uint64_t seed = a.seed.value_or(s.seed.value_or(1));

    std::filesystem::create_directories(a.out_dir);
    const std::filesystem::path dir(a.out_dir);

    std::vector<EmulationReport> reports;
    if (s.goodput_sweep.empty()) {
        reports.push_back(run_one(s, s.traffic.goodput_bps, seed));
    } else if (s.mode == ChannelMode::Simulated) {
        reports = run_sweep(s.cell, s.traffic, s.goodput_sweep, s.impairments, seed, s.options);
    } else {
        for (std::uint64_t g : s.goodput_sweep) reports.push_back(run_one(s, g, seed));
    }

    const EmulationReport& last = reports.back();
    std::ostringstream csv;
    write_report_csv(csv, last);
    write_file(dir / "report.csv", csv.str());
    if (reports.size() == 1) {
        write_file(dir / "summary.json", report_summary_json(last));
    } else {
        json all = json::array();
        for (const auto& r : reports) all.push_back(json::parse(report_summary_json(r)));
        write_file(dir / "summary.json", all.dump(2) + "\n");
        std::ostringstream sweep;
        write_sweep_csv(sweep, reports);
        write_file(dir / "sweep.csv", sweep.str());
    }

    if (a.format == "csv") {
        write_sweep_csv(out, reports);
    } else if (a.format == "json") {
        if (reports.size() == 1) {
            out << report_summary_json(last);
        } else {
            json all = json::array();
            for (const auto& r : reports) all.push_back(json::parse(report_summary_json(r)));
            out << all.dump(2) << '\n';
        }
    } else if (reports.size() == 1) {
        print_run_summary(last, out);
    } else {
        out << std::right << std::setw(14) << "goodput Mb/s" << std::setw(12) << "DL Mb/s"
            << std::setw(12) << "UL Mb/s" << std::setw(10) << "timeouts" << std::setw(9) << "jumbled"
            << '\n';
        for (const auto& r : reports) {
            out << std::setw(14) << fixed(static_cast<double>(r.goodput_bps) / 1e6, 3) << std::setw(12)
                << fixed(r.mean_dl_bps() / 1e6, 3) << std::setw(12) << fixed(r.mean_ul_bps() / 1e6, 3)
                << std::setw(10) << r.dl.timeouts + r.ul.timeouts << std::setw(9)
                << r.dl.jumbled + r.ul.jumbled << '\n';
        }
    }

    for (const auto& r : reports) {
        if (!r.complete) {
            err << "emulation stopped early: " << r.error << '\n';
            return kExitRuntime;
        }
    }
    return kExitOk;
}

void add_format(CLI::App* sub, std::string& format)
{
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"plain", "csv", "json"}))
        ->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Fronthaul functional-split planner and split 7.3 transport emulator", "fhsplit"};
    app.require_subcommand(1);

    PlanArgs plan;
    auto* plan_cmd = app.add_subcommand("plan", "Required fronthaul capacity for each split");
    auto* plan_cfg = plan_cmd->add_option("--config", plan.config, "Cell profile file")
                         ->check(CLI::ExistingFile);
    plan_cmd->add_option("--preset", plan.preset, "Built-in cell profile")
        ->check(CLI::IsMember(preset_names()))
        ->excludes(plan_cfg);
    add_format(plan_cmd, plan.format);

    CompareArgs compare;
    auto* compare_cmd = app.add_subcommand("compare", "7.2 / 7.3 efficiency ratios");
    compare_cmd->add_option("--sbw", compare.sbw, "Soft-bit widths")->delimiter(',')->capture_default_str();
    compare_cmd->add_option("--mod", compare.mods, "Modulation orders (2, 4, 6, 8)")
        ->delimiter(',')
        ->capture_default_str();
    compare_cmd->add_option("--iq", compare.iq, "I/Q component width in bits")->capture_default_str();
    add_format(compare_cmd, compare.format);

    BudgetArgs budget;
    auto* budget_cmd = app.add_subcommand("budget", "Maximum fronthaul distance within the HARQ budget");
    budget_cmd->add_option("--direction", budget.direction, "DL or UL")
        ->check(CLI::IsMember({"DL", "UL"}, CLI::ignore_case))
        ->capture_default_str();
    budget_cmd->add_option("--processing-ms", budget.processing_ms, "Baseband processing time")
        ->required();
    budget_cmd->add_option("--fibre-km", budget.fibre_km, "Fibre length to check");
    budget_cmd->add_option("--harq-rtt-ms", budget.budget.harq_rtt_ms)->capture_default_str();
    budget_cmd->add_option("--dl-deadline-ms", budget.budget.dl_processing_ms)->capture_default_str();
    budget_cmd->add_option("--ul-deadline-ms", budget.budget.ul_processing_ms)->capture_default_str();
    budget_cmd->add_option("--us-per-km", budget.budget.propagation_us_per_km)->capture_default_str();
    add_format(budget_cmd, budget.format);

    HeaderArgs header;
    auto* header_cmd = app.add_subcommand("header", "Encode or decode a transport header");
    header_cmd->require_subcommand(1);
    auto* encode_cmd = header_cmd->add_subcommand("encode", "Fields to 22-byte hex");
    encode_cmd->add_option("--timestamp", header.header.timestamp)->required();
    encode_cmd->add_option("--num-blocks", header.header.num_blocks)->required();
    encode_cmd->add_option("--content-type", header.header.content_type)->required();
    encode_cmd->add_option("--size", header.header.size)->required();
    encode_cmd->add_option("--sender-clock", header.header.sender_clock)->required();
    add_format(encode_cmd, header.format);
    auto* decode_cmd = header_cmd->add_subcommand("decode", "Hex bytes to fields");
    decode_cmd->add_option("hex", header.hex, "Header bytes in hex")->required();
    add_format(decode_cmd, header.format);

    EmulateArgs emulate;
    auto* emulate_cmd = app.add_subcommand("emulate", "Run a DU-RU emulation scenario");
    auto* emu_cfg = emulate_cmd->add_option("--config", emulate.config, "Scenario file")
                        ->check(CLI::ExistingFile);
    emulate_cmd->add_option("--preset", emulate.preset, "Cell profile for a peak-load run")
        ->check(CLI::IsMember(preset_names()))
        ->excludes(emu_cfg);
    emulate_cmd->add_option("--seed", emulate.seed, "Run seed (overrides the scenario)");
    emulate_cmd->add_option("--out", emulate.out_dir, "Output directory")->capture_default_str();
    emulate_cmd->add_option("--mode", emulate.mode, "Channel")->check(CLI::IsMember({"sim", "socket"}));
    emulate_cmd->add_option("--du-addr", emulate.du_addr, "DU host:port (socket mode)");
    emulate_cmd->add_option("--ru-addr", emulate.ru_addr, "RU host:port (socket mode)");
    add_format(emulate_cmd, emulate.format);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitValidation;
    }

    try {
        if (plan_cmd->parsed()) return cmd_plan(plan, out);
        if (compare_cmd->parsed()) return cmd_compare(compare, out);
        if (budget_cmd->parsed()) return cmd_budget(budget, out);
        if (encode_cmd->parsed()) return cmd_header_encode(header, out);
        if (decode_cmd->parsed()) return cmd_header_decode(header, out);
        if (emulate_cmd->parsed()) return cmd_emulate(emulate, out, err);
    } catch (const std::invalid_argument& e) {
        // ConfigError and UsageError land here.
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitValidation;
}

}  // namespace fhsplit::cli
