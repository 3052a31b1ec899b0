#include <CLI11.hpp>

#include <bergman/verify.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

using namespace bergman;
using namespace bergman::harness;

namespace {

struct Flags {
  std::string config, out, p, weight, w2, quad;
  std::optional<std::uint64_t> seed;
  std::optional<double> rmin;
  std::optional<std::size_t> mc;
};

Config resolve(const std::string& command, const Flags& f) {
  Config c = f.config.empty() ? default_config(command) : load_config_file(f.config);
  c.command = command;
  if (f.seed) c.seed = f.seed;
  if (!f.out.empty()) c.out = f.out;
  if (!f.p.empty()) c.p = parse_double_list(f.p);
  if (!f.weight.empty()) c.weight = f.weight;
  if (!f.w2.empty()) c.w2 = parse_complex_list(f.w2);
  if (!f.quad.empty()) c.quad = f.quad;
  if (f.rmin) c.rmin = *f.rmin;
  if (f.mc) c.mc = *f.mc;
  c.validate();
  return c;
}

Outcome dispatch(const Config& c) {
  if (c.command == "verify") return cmd_verify(c);
  if (c.command == "bb-sweep") return cmd_bb_sweep(c);
  if (c.command == "bell-check") return cmd_bell_check(c);
  if (c.command == "ibp-check") return cmd_ibp_check(c);
  if (c.command == "sobolev-check") return cmd_sobolev_check(c);
  if (c.command == "opnorm-sweep") return cmd_opnorm_sweep(c);
  if (c.command == "tent-area") return cmd_tent_area(c);
  throw ConfigError("unknown subcommand " + c.command);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bergman projection experiments on the symmetrized bidisk"};
  app.require_subcommand(1);
  Flags f;
  for (const char* name :
       {"verify", "bb-sweep", "bell-check", "ibp-check", "sobolev-check", "opnorm-sweep", "tent-area"}) {
    auto* s = app.add_subcommand(name);
    s->add_option("--config", f.config, "JSON config file");
    s->add_option("--out", f.out, "output path (stdout when omitted)");
    s->add_option("--seed", f.seed, "RNG seed");
    s->add_option("--p", f.p, "comma-separated exponents");
    s->add_option("--weight", f.weight, "constant:c | pair_power:s[:re:im] | pullback_delta:l | sobolev_target:k:p");
    s->add_option("--w2", f.w2, "comma-separated centres, e.g. 0,0.5,0.9i,0.3+0.2i");
    s->add_option("--rmin", f.rmin, "smallest tent radius");
    s->add_option("--quad", f.quad, "disk rule NRxNT");
    s->add_option("--mc", f.mc, "Monte Carlo sample count");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  std::string command = app.get_subcommands().front()->get_name();
  try {
    Config c = resolve(command, f);
    Outcome o = dispatch(c);
    write_output(c.out, o.text);
    for (auto& [suffix, text] : o.extra) {
      if (c.out.empty() || c.out == "-")
        std::fprintf(stderr, "note: %s output needs --out\n", suffix.c_str());
      else
        write_output(c.out + suffix, text);
    }
    if (command != "verify" && !c.out.empty() && c.out != "-") {
      std::filesystem::path rp(c.out);
      rp.replace_extension(rp.extension() == ".json" ? ".report.json" : ".json");
      write_output(rp.string(), report_json(o.checks).dump(2) + "\n");
    }
    for (auto& k : o.checks)
      if (command != "verify")
        std::fprintf(stderr, "%s %s/%s value=%s tol=%s\n", k.pass ? "PASS" : "FAIL", k.suite.c_str(), k.name.c_str(),
                     fmt(k.value).c_str(), fmt(k.tolerance).c_str());
    if (o.code != 0) std::fprintf(stderr, "first failing invariant: %s\n", o.first_failure().c_str());
    return o.code;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const InvalidRuleError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
