#include "finorb/check.hpp"

#include <functional>

#include "finorb/error.hpp"

namespace finorb {

namespace {

mpz_class mod(const mpz_class& x, const mpz_class& m) {
  if (m == 0) return x;
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
  return r;
}

std::vector<IntMatrix> matrices(const Json& j) {
  std::vector<IntMatrix> out;
  for (const auto& m : j) out.push_back(int_matrix_from_json(m));
  return out;
}

std::vector<mpz_class> ints(const Json& j) {
  std::vector<mpz_class> out;
  for (const auto& x : j) out.push_back(mpz_from_json(x));
  return out;
}

bool is_group_table(const std::vector<std::vector<std::size_t>>& t) {
  const std::size_t n = t.size();
  for (std::size_t a = 0; a < n; ++a) {
    if (t[a].size() != n || t[0][a] != a || t[a][0] != a) return false;
    std::vector<char> row(n, 0), col(n, 0);
    for (std::size_t b = 0; b < n; ++b) {
      if (t[a][b] >= n || t[b][a] >= n) return false;
      row[t[a][b]] = 1;
      col[t[b][a]] = 1;
    }
    for (std::size_t b = 0; b < n; ++b)
      if (!row[b] || !col[b]) return false;
  }
  if (n <= 64) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t c = 0; c < n; ++c)
          if (t[t[a][b]][c] != t[a][t[b][c]]) return false;
  }
  return true;
}

std::vector<std::vector<std::size_t>> table_from(const Json& j) {
  std::vector<std::vector<std::size_t>> t;
  for (const auto& row : j) t.push_back(row.get<std::vector<std::size_t>>());
  return t;
}

IntMatrix inverse_of(const IntMatrix& m) {
  return to_integer(solve_left(to_rational(m), RatMatrix::identity(m.rows())));
}

IntMatrix word_product(const std::vector<int>& word, const std::vector<IntMatrix>& gens) {
  IntMatrix m = IntMatrix::identity(gens.at(0).rows());
  for (int l : word) {
    const IntMatrix& g = gens.at(static_cast<std::size_t>(std::abs(l) - 1));
    m = m * (l > 0 ? g : inverse_of(g));
  }
  return m;
}

RatMatrix free_rows_of(const IntMatrix& a, const std::vector<mpz_class>& moduli) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < a.rows(); ++i)
    if (moduli[i] == 0) rows.push_back(i);
  RatMatrix r(rows.size(), a.cols());
  for (std::size_t k = 0; k < rows.size(); ++k)
    for (std::size_t j = 0; j < a.cols(); ++j) r(k, j) = a(rows[k], j);
  return r;
}

}  // namespace

CheckReport check_certificate(const std::string& text) {
  CheckReport rep;
  auto add = [&](const std::string& name, bool pass, const std::string& detail = "") {
    rep.items.push_back({name, pass, detail});
  };
  auto guarded = [&](const std::string& name, const std::function<bool(std::string&)>& fn) {
    std::string detail;
    bool ok = false;
    try {
      ok = fn(detail);
    } catch (const std::exception& e) {
      ok = false;
      detail = e.what();
    }
    add(name, ok, detail);
    return ok;
  };

  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    add("parse", false, e.what());
  }
  if (rep.items.empty()) {
    rep.byte_identical = dump(j) == text;
    add("byte_identical", rep.byte_identical, "re-serialization reproduces the file exactly");

    const bool shaped = guarded("schema", [&](std::string&) {
      expect_schema(j, "finorb.certificate/1");
      expect_fields(j,
                    {"schema", "instance", "scope", "orbit", "stabilizer", "central", "subgroup",
                     "cw", "rho_ab", "kernel", "coinvariants", "steps", "conclusion",
                     "cross_check", "consistent"},
                    {}, "certificate");
      return true;
    });

    if (shaped) {
      std::optional<Homomorphism> rho;
      guarded("hom", [&](std::string& d) {
        rho.emplace(hom_from_json(j["instance"]["hom"]));
        d = "hom satisfies every relator of " + rho->presentation().spec();
        return true;
      });
      std::vector<IntMatrix> catalog_h1;
      guarded("catalog_h1", [&](std::string&) {
        catalog_h1 = matrices(j["instance"]["catalog_h1"]);
        for (const auto& m : catalog_h1)
          if (!is_unimodular(m)) return false;
        if (rho && rho->presentation().is_surface()) {
          for (const auto& m : catalog_h1)
            if (!is_symplectic(m, rho->presentation().parameter())) return false;
        }
        return !catalog_h1.empty();
      });

      std::map<std::string, std::string> status;
      for (const auto& s : j["steps"]) status[s["name"].get<std::string>()] = s["status"].get<std::string>();

      std::vector<mpz_class> moduli;
      std::size_t f_order = 0;
      if (!j["central"].is_null()) {
        guarded("central", [&](std::string& d) {
          const Json& c = j["central"];
          moduli = ints(c["z_moduli"]);
          f_order = c["f_order"].get<std::size_t>();
          const auto ft = table_from(c["f_table"]);
          if (ft.size() != f_order || !is_group_table(ft)) return false;
          // Pullback images respect the relators in F.
          const auto pull = c["pullback_images"].get<std::vector<std::size_t>>();
          if (!rho || pull.size() != rho->images().size()) return false;
          std::vector<std::size_t> inv(f_order);
          for (std::size_t a = 0; a < f_order; ++a)
            for (std::size_t b = 0; b < f_order; ++b)
              if (ft[a][b] == 0) inv[a] = b;
          for (const auto& r : rho->presentation().relators()) {
            std::size_t acc = 0;
            for (Letter l : r) {
              const std::size_t x = pull.at(static_cast<std::size_t>(std::abs(l) - 1));
              acc = ft[acc][l > 0 ? x : inv[x]];
            }
            if (acc != 0) return false;
          }
          // Z words evaluate to the recorded Z generators.
          const auto& zg = c["z_generators"];
          const auto& zw = c["z_words"];
          if (zg.size() != zw.size()) return false;
          for (std::size_t i = 0; i < zg.size(); ++i) {
            if (!((*rho)(word_from_json(zw[i])) == rho->target()->element_from_json(zg[i]))) return false;
          }
          d = "F is a group of order " + std::to_string(f_order) + "; Z words evaluate correctly";
          return true;
        });
      }

      std::vector<IntMatrix> q_action;
      IntMatrix transfer;
      std::size_t rank_n = 0;
      if (!j["subgroup"].is_null()) {
        const Json& s = j["subgroup"];
        guarded("q_action_homomorphism", [&](std::string& d) {
          q_action = matrices(s["q_action"]);
          const auto qm = table_from(s["q_mult"]);
          if (qm.size() != q_action.size() || !is_group_table(qm)) return false;
          rank_n = s["rank"].get<std::size_t>();
          if (!(q_action[0] == IntMatrix::identity(rank_n))) return false;
          for (const auto& m : q_action)
            if (!is_unimodular(m)) return false;
          for (std::size_t a = 0; a < qm.size(); ++a)
            for (std::size_t b = 0; b < qm.size(); ++b)
              if (!(q_action[a] * q_action[b] == q_action[qm[a][b]])) return false;
          d = "q -> action is a homomorphism on all " + std::to_string(qm.size() * qm.size()) + " pairs";
          return true;
        });
        guarded("section", [&](std::string&) {
          const IntMatrix p = int_matrix_from_json(s["projection"]);
          const IntMatrix sec = int_matrix_from_json(s["section"]);
          if (!(p * sec == IntMatrix::identity(rank_n))) return false;
          if (!s["relations"].is_null() && !(p * int_matrix_from_json(s["relations"])).is_zero()) return false;
          return true;
        });
        guarded("character", [&](std::string& d) {
          const auto chi = ints(j["cw"]["character"]);
          const auto pred = ints(j["cw"]["predicted"]);
          if (chi.size() != q_action.size() || pred.size() != q_action.size()) return false;
          for (std::size_t q = 0; q < q_action.size(); ++q)
            if (chi[q] != q_action[q].trace()) return false;
          const Presentation& p = rho->presentation();
          const long regular = p.is_surface() ? 2L * p.parameter() - 2 : p.parameter() - 1L;
          const long trivial = p.is_surface() ? 2 : 1;
          for (std::size_t q = 0; q < pred.size(); ++q) {
            const mpz_class expect = q == 0 ? mpz_class(regular * static_cast<long>(pred.size()) + trivial)
                                            : mpz_class(trivial);
            if (pred[q] != expect) return false;
          }
          const bool equal = chi == pred;
          d = equal ? "traces equal the predicted character" : "traces differ from the prediction";
          return equal == (j["cw"]["verdict"] == "PASS");
        });
        guarded("transfer_fixed", [&](std::string&) {
          transfer = int_matrix_from_json(s["transfer"]);
          for (const auto& m : q_action)
            if (!(m * transfer == transfer)) return false;
          return rank(transfer) == static_cast<std::size_t>(rho->presentation().generator_count());
        });
      }

      IntMatrix rho_ab;
      if (!j["rho_ab"].is_null()) {
        guarded("rho_ab_invariant", [&](std::string&) {
          rho_ab = int_matrix_from_json(j["rho_ab"]);
          if (rho_ab.rows() != moduli.size() || rho_ab.cols() != rank_n) return false;
          for (const auto& m : q_action) {
            const IntMatrix diff = rho_ab * m - rho_ab;
            for (std::size_t r = 0; r < diff.rows(); ++r)
              for (std::size_t c = 0; c < diff.cols(); ++c)
                if (mod(diff(r, c), moduli[r]) != 0) return false;
          }
          return true;
        });
      }

      if (!j["kernel"].is_null()) {
        guarded("projector", [&](std::string&) {
          const RatMatrix p0 = rat_matrix_from_json(j["kernel"]["projector"]);
          RatMatrix sum(rank_n, rank_n);
          for (const auto& m : q_action) sum = sum + to_rational(m);
          for (std::size_t r = 0; r < rank_n; ++r)
            for (std::size_t c = 0; c < rank_n; ++c)
              sum(r, c) /= mpq_class(static_cast<unsigned long>(q_action.size()));
          if (!(sum == p0) || !(p0 * p0 == p0)) return false;
          const bool vanishes = (free_rows_of(rho_ab, moduli) * (RatMatrix::identity(rank_n) - p0)).is_zero();
          return vanishes == (j["kernel"]["verdict"] == "PASS");
        });
      }

      if (!j["coinvariants"].is_null()) {
        const Json& c = j["coinvariants"];
        const auto mats = matrices(c["matrices"]);
        guarded("stabilizer_matrices", [&](std::string& d) {
          for (const auto& g : c["generators"]) {
            const auto w = g["word"].get<std::vector<int>>();
            if (!(word_product(w, catalog_h1) == mats.at(g["matrix"].get<std::size_t>()))) return false;
          }
          d = std::to_string(c["generators"].size()) + " generator words multiply out to the recorded matrices";
          return true;
        });
        guarded("naturality", [&](std::string&) {
          for (const auto& s : c["naturality"]) {
            const IntMatrix phi = int_matrix_from_json(s["phi"]);
            const IntMatrix m = int_matrix_from_json(s["m"]);
            if (!(phi * transfer == transfer * m)) return false;
            if (!(m == word_product(s["word"].get<std::vector<int>>(), catalog_h1))) return false;
          }
          return true;
        });
        guarded("coinvariant_snf", [&](std::string& d) {
          const std::size_t n = catalog_h1.at(0).rows();
          const IntMatrix rel = int_matrix_from_json(c["relations"]);
          if (!(rel == coinvariant_relations(n, std::span<const IntMatrix>(mats)))) return false;
          const IntMatrix u = int_matrix_from_json(c["snf"]["U"]);
          const IntMatrix dm = int_matrix_from_json(c["snf"]["D"]);
          const IntMatrix v = int_matrix_from_json(c["snf"]["V"]);
          if (!(u * rel * v == dm) || !is_unimodular(u) || !is_unimodular(v)) return false;
          std::size_t nonzero = 0;
          std::vector<mpz_class> torsion;
          mpz_class prev = 1;
          for (std::size_t r = 0; r < dm.rows(); ++r) {
            for (std::size_t k = 0; k < dm.cols(); ++k)
              if (r != k && dm(r, k) != 0) return false;
            if (r >= dm.cols()) continue;
            const mpz_class& x = dm(r, r);
            if (x < 0) return false;
            if (x != 0) {
              if (prev == 0 || x % prev != 0) return false;
              ++nonzero;
              if (x > 1) torsion.push_back(x);
            }
            prev = x;
          }
          const Json& inv = c["invariants"];
          if (inv["free_rank"].get<std::size_t>() != n - nonzero || ints(inv["torsion"]) != torsion) return false;
          d = "U * R * V == D with unimodular U, V; invariants read off D";
          return true;
        });
        guarded("rho_ab_on_v0", [&](std::string&) {
          const bool finite = c["invariants"]["free_rank"].get<std::size_t>() == 0;
          const bool zero = (free_rows_of(rho_ab, moduli) * to_rational(transfer)).is_zero();
          return (finite && zero) == (c["verdict"] == "PASS");
        });
      }

      guarded("conclusion", [&](std::string& d) {
        const Json& con = j["conclusion"];
        if (con["kind"] == "ImageFinite") {
          for (const auto& [name, st] : status)
            if (st != "PASS") return false;
          for (const char* needed : {"orbit", "stabilizer", "central", "center_coinvariants", "subgroup",
                                     "chevalley_weil", "rho_ab", "kernel", "coinvariants", "conclusion"})
            if (!status.count(needed)) return false;
          if (!free_rows_of(rho_ab, moduli).is_zero()) return false;
          const mpz_class z = mpz_from_json(j["central"]["z_order"]);
          if (j["central"]["kind"] == "finite_center") {
            mpz_class prod = 1;
            for (const auto& m : moduli) prod *= m;
            if (prod != z) return false;
          }
          const mpz_class order = mpz_from_json(con["order"]);
          if (order != z * static_cast<unsigned long>(f_order)) return false;
          if (j["cross_check"]["status"] != "closed" || mpz_from_json(j["cross_check"]["order"]) != order)
            return false;
          d = "ImageFinite(" + order.get_str() + ") = |F| * |Z|, matching the direct closure";
          return true;
        }
        const std::string failed = con["failed_step"].get<std::string>();
        d = "Inconclusive at " + failed;
        return status.count(failed) && status[failed] == "FAIL";
      });
    }
  }

  rep.pass = true;
  Json items = Json::array();
  for (const auto& it : rep.items) {
    rep.pass = rep.pass && it.pass;
    items.push_back({{"name", it.name}, {"status", it.pass ? "PASS" : "FAIL"}, {"detail", it.detail}});
  }
  rep.json = {{"schema", "finorb.check/1"},
              {"verdict", rep.pass ? "PASS" : "FAIL"},
              {"byte_identical", rep.byte_identical},
              {"checks", std::move(items)}};
  return rep;
}

}  // namespace finorb
