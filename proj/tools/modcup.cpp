// modcup: command-line front end for the trilinear-form library.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "criteria.hpp"
#include "modcup/cocycle.hpp"
#include "modcup/error.hpp"
#include "modcup/forms.hpp"
#include "modcup/triform.hpp"

using namespace modcup;

namespace {

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

struct RunConfig {
    double r1 = nan_value, r2 = nan_value;
    int M = 30;
    double tol = 1e-10;
    std::string out;
    std::string format;
    int threads = 0;
    std::uint64_t seed = 20261014;
    std::string check;
    // command specific
    std::string cells;
    bool cells_given = false;
    bool no_timing = false;
    std::string method = "series";
    double mu1 = nan_value, mu2 = nan_value, mu3 = nan_value;
    double r = nan_value;
    std::string form = "eta";
    int rmin = 2, rmax = 14;
    std::vector<int> criteria;
};

// Raised for invalid combinations the parser cannot see; exit status 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string g17(double x)
{
    if (!std::isfinite(x))
        return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// shortest text that reads back to the same double, for echoed inputs
std::string shortest(double x)
{
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x)
            break;
    }
    return buf;
}

std::string json_string(const std::string& s)
{
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            }
            else {
                out += c;
            }
        }
    }
    return out + "\"";
}

// Flat JSON object with insertion order kept; numbers at 17 digits.
class JsonObject {
public:
    JsonObject& num(const std::string& key, double x)
    {
        return raw(key, std::isfinite(x) ? g17(x) : "null");
    }
    JsonObject& integer(const std::string& key, long long x) { return raw(key, std::to_string(x)); }
    JsonObject& str(const std::string& key, const std::string& s) { return raw(key, json_string(s)); }
    JsonObject& raw(const std::string& key, const std::string& text)
    {
        body_ += (body_.empty() ? "" : ",") + json_string(key) + ":" + text;
        return *this;
    }
    std::string text() const { return "{" + body_ + "}"; }

private:
    std::string body_;
};

void emit(const RunConfig& cfg, const std::string& text)
{
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(cfg.out, std::ios::binary);
    if (!file)
        throw UsageError("cannot open output file " + cfg.out);
    file << text;
}

std::string resolved_format(const RunConfig& cfg, const char* fallback)
{
    return cfg.format.empty() ? fallback : cfg.format;
}

void require(double x, const char* flag)
{
    if (std::isnan(x))
        throw UsageError(std::string("missing required option ") + flag);
}

std::string csv_field(std::string s)
{
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '"')
            c = ' ';
    return s;
}

JsonObject base_params(const char* command)
{
    JsonObject p;
    p.str("command", command);
    return p;
}

std::string record(const JsonObject& params, cplx value, double error)
{
    JsonObject rec;
    rec.raw("params", params.text());
    rec.num("value_re", value.real()).num("value_im", value.imag()).num("error_estimate", error);
    return rec.text();
}

std::vector<std::pair<double, double>> parse_cells(const std::string& text)
{
    std::vector<std::pair<double, double>> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.find_first_not_of(' ') == std::string::npos)
            continue;
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw UsageError("cell '" + item + "' is not of the form r1:r2");
        try {
            out.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
        }
        catch (const std::logic_error&) {
            throw UsageError("cell '" + item + "' is not numeric");
        }
    }
    return out;
}

int cmd_table(const RunConfig& cfg)
{
    std::vector<std::pair<double, double>> grid;
    if (cfg.cells_given)
        grid = parse_cells(cfg.cells);
    else if (!std::isnan(cfg.r1) || !std::isnan(cfg.r2)) {
        require(cfg.r1, "--r1");
        require(cfg.r2, "--r2");
        grid = {{cfg.r1, cfg.r2}};
    }
    else
        grid = triform::table1_grid();

    std::vector<triform::TableCell> reference;
    if (!cfg.check.empty()) {
        std::ifstream in(cfg.check);
        if (!in)
            throw UsageError("cannot open reference file " + cfg.check);
        reference = triform::read_table_reference(in);
    }

    struct Row {
        double r1, r2;
        std::string status; // ok, skip, error
        std::string reason;
        double value = nan_value, tail = nan_value, seconds = 0.0;
    };
    std::vector<Row> rows;
    int status = 0;
    for (auto [r1, r2] : grid) {
        Row row{r1, r2, "ok", ""};
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const auto res = triform::table_entry(r1, r2, cfg.M, cfg.tol, cfg.threads);
            row.value = res.value.real();
            row.tail = res.tail_estimate;
        }
        catch (const ParameterError& e) {
            row.status = "skip";
            row.reason = e.what();
        }
        catch (const Error& e) {
            row.status = "error";
            row.reason = std::string(e.kind()) + ": " + e.what();
            status = 1;
            std::cerr << JsonObject()
                             .str("error", e.kind())
                             .str("message", e.what())
                             .num("r1", r1)
                             .num("r2", r2)
                             .text()
                      << '\n';
        }
        if (!cfg.no_timing)
            row.seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rows.push_back(row);
    }

    int checked = 0, failed = 0;
    for (const auto& ref : reference) {
        for (const auto& row : rows) {
            if (row.r1 != ref.r1 || row.r2 != ref.r2)
                continue;
            ++checked;
            const bool ok = row.status == "ok" &&
                            std::abs(row.value - ref.value) <= ref.rel_tol * std::abs(ref.value);
            if (!ok) {
                ++failed;
                std::cerr << JsonObject()
                                 .str("error", "check")
                                 .num("r1", row.r1)
                                 .num("r2", row.r2)
                                 .num("value", row.value)
                                 .num("reference", ref.value)
                                 .num("rel_tol", ref.rel_tol)
                                 .text()
                          << '\n';
            }
        }
    }
    if (!reference.empty()) {
        std::cerr << "check: " << checked - failed << " of " << checked
                  << " cells within tolerance\n";
        if (failed > 0)
            status = 1;
    }

    std::ostringstream out;
    if (resolved_format(cfg, "csv") == "json") {
        out << "[";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto& row = rows[i];
            JsonObject o;
            o.num("r1", row.r1).num("r2", row.r2).str("status", row.status);
            if (row.status == "ok")
                o.num("value", row.value).num("tail_estimate", row.tail);
            else
                o.str("reason", row.reason);
            o.num("seconds", row.seconds);
            out << (i ? "," : "") << o.text();
        }
        out << "]\n";
    }
    else {
        out << "r1,r2,value,tail_estimate,seconds\n";
        char secs[32];
        for (const auto& row : rows) {
            std::snprintf(secs, sizeof secs, "%.3f", row.seconds);
            out << shortest(row.r1) << ',' << shortest(row.r2) << ',';
            if (row.status == "ok")
                out << g17(row.value) << ',' << g17(row.tail);
            else
                out << row.status << ',' << csv_field(row.reason);
            out << ',' << secs << '\n';
        }
    }
    emit(cfg, out.str());
    return status;
}

int cmd_tri(const RunConfig& cfg)
{
    require(cfg.r1, "--r1");
    require(cfg.r2, "--r2");
    if (cfg.method != "series" && cfg.method != "direct")
        throw UsageError("--method must be series or direct");
    const auto wt = triform::WeightTriple::from_eta(cfg.r1, cfg.r2);
    const auto f1 = forms::eta_power_expansion(cfg.r1, cfg.M);
    const auto f2 = forms::eta_power_expansion(cfg.r2, cfg.M);
    const auto f3 = forms::e4_eta_product(cfg.r1, cfg.r2, cfg.M);
    cplx value;
    double error = cfg.tol;
    if (cfg.method == "series") {
        const auto res = triform::triple_form_series(wt, f1, f2, f3, cfg.tol, cfg.threads);
        value = res.value;
        error = res.tail_estimate + cfg.tol;
    }
    else {
        value = triform::triple_form_direct(wt, f1, f2, f3, cfg.tol);
    }
    auto params = base_params("tri");
    params.num("r1", cfg.r1).num("r2", cfg.r2).integer("M", cfg.M).num("tol", cfg.tol);
    params.str("method", cfg.method);
    emit(cfg, record(params, value, error) + "\n");
    return 0;
}

int cmd_psi(const RunConfig& cfg)
{
    require(cfg.r1, "--r1");
    require(cfg.r2, "--r2");
    require(cfg.mu1, "--mu1");
    require(cfg.mu2, "--mu2");
    require(cfg.mu3, "--mu3");
    const cplx value = triform::psi_kernel(cfg.r1, cfg.r2, cfg.mu1, cfg.mu2, cfg.mu3, cfg.tol);
    auto params = base_params("psi");
    params.num("r1", cfg.r1).num("r2", cfg.r2).num("mu1", cfg.mu1).num("mu2", cfg.mu2);
    params.num("mu3", cfg.mu3).num("tol", cfg.tol);
    emit(cfg, record(params, value, cfg.tol / (2 * std::numbers::pi)) + "\n");
    return 0;
}

int cmd_haberland(const RunConfig& cfg)
{
    require(cfg.r, "--r");
    const auto f = forms::eta_power_expansion(cfg.r, cfg.M);
    const cplx lhs = triform::haberland_lhs(f, f, cfg.r, cfg.tol);
    const cplx pet = triform::petersson(f, f, cfg.r, cfg.tol);
    auto params = base_params("haberland");
    params.num("r", cfg.r).integer("M", cfg.M).num("tol", cfg.tol);
    JsonObject rec;
    rec.raw("params", params.text());
    rec.num("value_re", lhs.real()).num("value_im", lhs.imag()).num("error_estimate", cfg.tol);
    rec.num("petersson", pet.real());
    rec.num("relative_residual", std::abs(lhs + cplx(0.0, 2.0) * pet) / std::abs(pet));
    emit(cfg, rec.text() + "\n");
    return 0;
}

int cmd_coeffs(const RunConfig& cfg)
{
    forms::QExpansion f;
    if (cfg.form == "eta") {
        require(cfg.r, "--r");
        f = forms::eta_power_expansion(cfg.r, cfg.M);
    }
    else if (cfg.form == "e4") {
        f = forms::e4_expansion(cfg.M);
    }
    else {
        require(cfg.r1, "--r1");
        require(cfg.r2, "--r2");
        f = forms::e4_eta_product(cfg.r1, cfg.r2, cfg.M);
    }
    std::ostringstream out;
    if (resolved_format(cfg, "csv") == "json") {
        out << "[";
        for (int m = 0; m <= f.order(); ++m) {
            out << (m ? "," : "")
                << JsonObject().integer("m", m).num("mu", f.mu(m)).num("a", f.coeff(m)).text();
        }
        out << "]\n";
    }
    else {
        forms::write_coeff_csv(out, f);
    }
    emit(cfg, out.str());
    return 0;
}

int cmd_coinv(const RunConfig& cfg)
{
    if (cfg.rmin > cfg.rmax)
        throw UsageError("--rmin must not exceed --rmax");
    const bool json = resolved_format(cfg, "csv") == "json";
    std::ostringstream out;
    out << (json ? "[" : "r,p,dim\n");
    bool first = true;
    for (int r = cfg.rmin; r <= cfg.rmax; ++r) {
        for (int p = r % 2; p < 12; p += 2) {
            const auto d = cocycle::poly_coinvariant_dim(r, p);
            if (json) {
                out << (first ? "" : ",")
                    << JsonObject()
                           .integer("r", r)
                           .integer("p", p)
                           .integer("dim", d.dim)
                           .num("margin", d.margin)
                           .text();
            }
            else {
                out << r << ',' << p << ',' << d.dim << '\n';
            }
            first = false;
        }
    }
    if (json)
        out << "]\n";
    emit(cfg, out.str());
    return 0;
}

int cmd_selftest(const RunConfig& cfg)
{
    acceptance::SuiteConfig suite;
    suite.seed = cfg.seed;
    suite.threads = cfg.threads;
    suite.reference_path = cfg.check.empty() ? MODCUP_TABLE_REF : cfg.check;
    std::ostringstream out;
    int failed = 0;
    acceptance::run_suite(suite, cfg.criteria, [&](const acceptance::Outcome& o) {
        out << acceptance::format_outcome(o) << '\n';
        if (cfg.out.empty())
            std::cout << acceptance::format_outcome(o) << std::endl;
        if (!o.pass)
            ++failed;
    });
    if (!cfg.out.empty())
        emit(cfg, out.str());
    return failed == 0 ? 0 : 1;
}

void add_common(CLI::App* sub, RunConfig& cfg)
{
    sub->add_option("--M", cfg.M, "Truncation order of the q-expansions")
        ->check(CLI::Range(5, 500));
    sub->add_option("--tol", cfg.tol, "Absolute tolerance")->check(CLI::Range(1e-12, 1e-2));
    sub->add_option("--out", cfg.out, "Output file (default: stdout)");
    sub->add_option("--format", cfg.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", cfg.threads, "Worker threads (0: all cores)")
        ->envname("MODCUP_THREADS")
        ->check(CLI::Range(0, 1024));
    sub->add_option("--seed", cfg.seed, "Seed for randomized sweeps");
}

void add_weights(CLI::App* sub, RunConfig& cfg)
{
    sub->add_option("--r1", cfg.r1, "Weight of f1");
    sub->add_option("--r2", cfg.r2, "Weight of f2");
}

} // namespace

int main(int argc, char** argv)
{
    RunConfig cfg;
    CLI::App app{"Cup-product trilinear form for real-weight modular forms"};
    app.require_subcommand(1);

    auto* table = app.add_subcommand("table", "Table of bare triple sums");
    add_common(table, cfg);
    add_weights(table, cfg);
    table->add_option("--check", cfg.check, "Reference file r1,r2,value,rel_tol");
    auto* cells = table->add_option("--cells", cfg.cells, "Cells as r1:r2,r1:r2,...");
    table->add_flag("--no-timing", cfg.no_timing, "Write 0 in the seconds column");

    auto* tri = app.add_subcommand("tri", "Trilinear form T for the eta/E4 triple");
    add_common(tri, cfg);
    add_weights(tri, cfg);
    tri->add_option("--method", cfg.method, "series or direct");

    auto* psi = app.add_subcommand("psi", "Psi kernel with its 1/(2 pi i) prefactor");
    add_common(psi, cfg);
    add_weights(psi, cfg);
    psi->add_option("--mu1", cfg.mu1);
    psi->add_option("--mu2", cfg.mu2);
    psi->add_option("--mu3", cfg.mu3);

    auto* hab = app.add_subcommand("haberland", "Haberland pairing against -2i (f, f)");
    add_common(hab, cfg);
    hab->add_option("--r", cfg.r, "Weight of f = eta^{2r}");

    auto* coeffs = app.add_subcommand("coeffs", "Fourier coefficients");
    add_common(coeffs, cfg);
    add_weights(coeffs, cfg);
    coeffs->add_option("--form", cfg.form, "eta, e4 or e4eta")
        ->check(CLI::IsMember({"eta", "e4", "e4eta"}));
    coeffs->add_option("--r", cfg.r, "Weight of eta^{2r}");

    auto* coinv = app.add_subcommand("coinv", "Polynomial coinvariant dimensions");
    add_common(coinv, cfg);
    coinv->add_option("--rmin", cfg.rmin)->check(CLI::Range(2, 40));
    coinv->add_option("--rmax", cfg.rmax)->check(CLI::Range(2, 40));

    auto* self = app.add_subcommand("selftest", "Run the acceptance suite");
    add_common(self, cfg);
    self->add_option("--check", cfg.check, "Table reference file");
    self->add_option("--criteria", cfg.criteria, "Criteria to run (default: all)")
        ->check(CLI::Range(1, 9));

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    cfg.cells_given = cells->count() > 0;

    try {
        if (table->parsed())
            return cmd_table(cfg);
        if (tri->parsed())
            return cmd_tri(cfg);
        if (psi->parsed())
            return cmd_psi(cfg);
        if (hab->parsed())
            return cmd_haberland(cfg);
        if (coeffs->parsed())
            return cmd_coeffs(cfg);
        if (coinv->parsed())
            return cmd_coinv(cfg);
        return cmd_selftest(cfg);
    }
    catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    }
    catch (const ParameterError& e) {
        std::cerr << JsonObject().str("error", e.kind()).str("message", e.what()).text() << '\n';
        return 2;
    }
    catch (const Error& e) {
        std::cerr << JsonObject().str("error", e.kind()).str("message", e.what()).text() << '\n';
        return 1;
    }
}
