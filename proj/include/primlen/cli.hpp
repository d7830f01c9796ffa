#pragma once

// Command-line driver. Exit codes: 0 success or verified, 1 verification
// failure, 2 usage or parse error, 3 unsupported input.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "primlen/document.hpp"
#include "primlen/liedecomp.hpp"
#include "primlen/parse.hpp"
#include "primlen/polydecomp.hpp"

namespace primlen {

enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitUsage = 2, kExitUnsupported = 3 };

namespace detail {

inline bool degree_cap_env_valid() {
  const char* env = std::getenv("PRIMLEN_DEGREE_CAP");
  if (env == nullptr || *env == '\0') return true;
  const std::string s(env);
  return s.size() <= 9 && s.find_first_not_of("0123456789") == std::string::npos && std::stoul(s) > 0;
}

inline void emit(const Json& doc, const std::string& out_path, std::ostream& out) {
  const auto text = doc.dump(2) + "\n";
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(out_path);
  if (!file) throw InvalidArgument("cannot write " + out_path);
  file << text;
  out << doc["summands"].size() << " summand(s) written to " << out_path << "\n";
}

inline std::string read_all(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream file(path);
  if (!file) throw InvalidArgument("cannot read " + path);
  return {std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>()};
}

}  // namespace detail

/// `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decompose polynomials and free metabelian Lie elements into primitive summands"};
  app.name("primlen");
  app.require_subcommand(1);

  std::size_t vars = 0;
  std::string field = "Q";
  std::string out_path;
  std::string expr;
  std::string doc_path;
  std::optional<std::uint64_t> degree;

  auto* dec_cmd = app.add_subcommand("decompose", "decompose an element and print its certificate document");
  dec_cmd->require_subcommand(1);
  auto* dpoly = dec_cmd->add_subcommand("poly", "polynomial over Q");
  auto* dlie = dec_cmd->add_subcommand("lie", "free metabelian Lie algebra element");
  for (auto* sub : {dpoly, dlie}) {
    sub->add_option("--vars,-d", vars, "number of generators")->required()->check(CLI::PositiveNumber);
    sub->add_option("--field,-F", field, "Q, F2, F3 or F<p>");
    sub->add_option("--out,-o", out_path, "write the document to this file");
    sub->add_option("expr", expr, "expression")->required();
  }

  auto* ver = app.add_subcommand("verify", "check a certificate document");
  ver->add_option("file", doc_path, "document path, or - for stdin")->required();

  auto* bound_cmd = app.add_subcommand("bound", "print the summand bound");
  bound_cmd->require_subcommand(1);
  auto* bpoly = bound_cmd->add_subcommand("poly", "binom(n+d-1, d-1) for degree n");
  bpoly->add_option("--vars,-d", vars, "number of variables")->required()->check(CLI::PositiveNumber);
  bpoly->add_option("--degree,-n", degree, "total degree");
  bpoly->add_option("expr", expr, "polynomial whose bound to print");
  auto* blie = bound_cmd->add_subcommand("lie", "bound by rank and field");
  blie->add_option("--vars,-d", vars, "number of generators")->required()->check(CLI::PositiveNumber);
  blie->add_option("--field,-F", field, "Q, F2, F3 or F<p>");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (!detail::degree_cap_env_valid()) {
    err << "error: PRIMLEN_DEGREE_CAP must be a positive integer\n";
    return kExitUsage;
  }

  try {
    const auto fd = FieldDescriptor::parse(field);
    if (dpoly->parsed()) {
      const auto f = parse_poly(expr, vars, fd);
      if (!fd.is_rationals()) {
        throw Unsupported("polynomial decomposition needs characteristic 0 (got " + fd.to_string() + ")");
      }
      const auto dec = decompose(f);
      if (const auto r = verify(dec); !r) {
        err << "internal error: decomposition failed its own check: " << r.diagnostic << "\n";
        return kExitVerifyFailed;
      }
      detail::emit(to_json(dec), out_path, out);
      return kExitOk;
    }
    if (dlie->parsed()) {
      if (vars < 3) throw Unsupported("Lie decomposition needs --vars >= 3");
      const auto f = parse_lie(expr, vars, fd);
      const auto dec = decompose_lie(f);
      if (const auto r = verify_lie(dec); !r) {
        err << "internal error: decomposition failed its own check: " << r.diagnostic << "\n";
        return kExitVerifyFailed;
      }
      detail::emit(to_json(dec), out_path, out);
      return kExitOk;
    }
    if (ver->parsed()) {
      Json doc;
      try {
        doc = Json::parse(detail::read_all(doc_path));
      } catch (const Json::parse_error& e) {
        err << "error: " << doc_path << " is not valid JSON: " << e.what() << "\n";
        return kExitUsage;
      }
      const auto check = verify_document(doc);
      if (!check.ok) {
        err << "verification failed: " << check.diagnostic << "\n";
        return kExitVerifyFailed;
      }
      out << "verified: " << check.summands << " summand(s)\n";
      return kExitOk;
    }
    if (bpoly->parsed()) {
      std::optional<std::uint64_t> b;
      if (degree && !expr.empty()) throw InvalidArgument("give either --degree or an expression");
      if (degree) {
        if (*degree == 0) {
          b = 2;
        } else if (*degree == 1) {
          b = 1;
        } else if (vars > 1) {
          b = plength_bound(*degree, vars);
        }
      } else if (!expr.empty()) {
        b = expected_poly_bound(parse_poly(expr, vars, FieldDescriptor::rationals()));
      } else {
        throw InvalidArgument("give --degree or an expression");
      }
      out << (b ? std::to_string(*b) : std::string("infinite")) << "\n";
      return kExitOk;
    }
    if (blie->parsed()) {
      if (vars < 3) throw Unsupported("the Lie bound needs --vars >= 3");
      out << lie_bound(vars, fd) << "\n";
      return kExitOk;
    }
  } catch (const Unsupported& e) {
    err << "unsupported: " << e.what() << "\n";
    return kExitUnsupported;
  } catch (const DegreeCapExceeded& e) {
    err << "unsupported: " << e.what() << "\n";
    return kExitUnsupported;
  } catch (const DocumentError& e) {
    err << "error: malformed document: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  err << app.help();
  return kExitUsage;
}

inline int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace primlen
