#include "bfm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "bfm/command.hpp"
#include "bfm/error.hpp"

namespace bfm {

// Persistent workers for the field phase. Tile 0 runs on the calling thread.
class TileExecutor {
public:
    explicit TileExecutor(int n) : n_(n), errors_(static_cast<std::size_t>(n)) {
        for (int t = 1; t < n; ++t) threads_.emplace_back([this, t] { loop(t); });
    }

    ~TileExecutor() {
        {
            std::lock_guard lock(mu_);
            stop_ = true;
            ++generation_;
        }
        wake_.notify_all();
        for (auto& th : threads_) th.join();
    }

    void run(const std::function<void(int)>& fn) {
        if (n_ == 1) {
            fn(0);
            return;
        }
        {
            std::lock_guard lock(mu_);
            job_ = &fn;
            pending_ = n_ - 1;
            std::fill(errors_.begin(), errors_.end(), nullptr);
            ++generation_;
        }
        wake_.notify_all();
        try {
            fn(0);
        } catch (...) {
            errors_[0] = std::current_exception();
        }
        std::unique_lock lock(mu_);
        done_.wait(lock, [this] { return pending_ == 0; });
        for (auto& e : errors_) {
            if (e) std::rethrow_exception(e);
        }
    }

private:
    void loop(int t) {
        long seen = 0;
        for (;;) {
            std::unique_lock lock(mu_);
            wake_.wait(lock, [&] { return generation_ != seen; });
            seen = generation_;
            if (stop_) return;
            const auto* job = job_;
            lock.unlock();
            std::exception_ptr err;
            try {
                (*job)(t);
            } catch (...) {
                err = std::current_exception();
            }
            lock.lock();
            errors_[t] = err;
            if (--pending_ == 0) done_.notify_one();
        }
    }

    int n_;
    std::vector<std::thread> threads_;
    std::vector<std::exception_ptr> errors_;
    std::mutex mu_;
    std::condition_variable wake_, done_;
    const std::function<void(int)>* job_ = nullptr;
    long generation_ = 0;
    int pending_ = 0;
    bool stop_ = false;
};

struct Simulation::Unit {
    UnitState state;
    Field rho_star, xx_star, xy_star;
    CellBox support;  // bounding box of rho > 0
    CellBox window;   // cells updated this step
    double strength = 0.0;
    double mass_x = 0.0, mass_y = 0.0, mass = 0.0;
    double mean_speed = 0.0;
    double closein = 0.0, ranged = 0.0, dispersed = 0.0, clamped = 0.0;
    double coefficient = 0.0;  // summed ranged attack coefficients this step

    // per-row partial sums of the correcting stage
    std::vector<double> row_mass, row_mx, row_speed, row_closein, row_ranged, row_clamped;
    std::vector<int> row_lo, row_hi;
};

struct Simulation::TileScratch {
    Block rho, xx, xy;
    TransportScratch transport;
    std::vector<double> vx, vy, ux, uy, face_u, face_v, crowd;
    std::vector<double> rate_rho, rate_xx, rate_xy, closein;
    double vmax = 0.0;
    int vi = 0, vj = 0;
    bool bad = false;
    int bad_unit = 0, bad_i = 0, bad_j = 0;
};

namespace {

std::size_t side_index(Side s) { return s == Side::Red ? 0 : 1; }

CellBox support_of(const Field& rho) {
    CellBox b{rho.nx(), 0, rho.ny(), 0};
    for (int j = 0; j < rho.ny(); ++j) {
        const double* r = rho.row(j);
        for (int i = 0; i < rho.nx(); ++i) {
            if (r[i] > 0.0) {
                b.i0 = std::min(b.i0, i);
                b.i1 = std::max(b.i1, i + 1);
                b.j0 = std::min(b.j0, j);
                b.j1 = std::max(b.j1, j + 1);
            }
        }
    }
    return b.empty() ? CellBox{} : b;
}

}  // namespace

Simulation::Simulation(const Scenario& scenario, SolverOptions options)
    : scenario_(scenario), options_(options) {
    scenario_.validate();
    kernels_ = options_.kernels ? options_.kernels : &kernels::active();
    const Grid& g = scenario_.grid();
    const ModelParams& mp = scenario_.params;
    kin_ = KinematicsParams{mp.max_speed, mp.max_density, mp.diffusion, g.ds, scenario_.terrain_effects};
    slope_ = elevation_gradient_field(*scenario_.terrain);
    taper_ = boundary_taper(g, mp.boundary_fraction);

    for (const UnitSeed& seed : scenario_.units) {
        auto u = std::make_unique<Unit>();
        u->state = init_unit(seed, g, mp.max_density);
        u->rho_star = Field(g);
        u->xx_star = Field(g);
        u->xy_star = Field(g);
        u->support = support_of(u->state.density);
        const DensityMoments m = density_moments(u->state.density, g, u->support);
        u->mass = m.mass;
        u->mass_x = m.mass_x;
        u->mass_y = m.mass_y;
        u->strength = m.mass * g.cell_area();
        for (auto* v : {&u->row_mass, &u->row_mx, &u->row_speed, &u->row_closein, &u->row_ranged, &u->row_clamped}) {
            v->assign(g.ny, 0.0);
        }
        u->row_lo.assign(g.ny, g.nx);
        u->row_hi.assign(g.ny, 0);
        units_.push_back(std::move(u));
    }

    // Batteries face the strength-weighted centre of the enemy line.
    artillery_total_ = Field(g);
    for (ArtilleryUnit& a : scenario_.artillery) {
        Vec2 c{};
        double w = 0.0;
        for (const auto& u : units_) {
            if (u->state.side == a.side) continue;
            c += Vec2{u->mass_x, u->mass_y};
            w += u->mass;
        }
        if (w > 0.0) {
            const Vec2 d = c * (1.0 / w) - a.position;
            a.bearing = std::atan2(d.y, d.x);
        }
        const Field f = bfm::artillery_density(a, g, mp.max_density, mp.artillery_peak_fraction, mp.artillery_scale);
        for (std::size_t n = 0; n < f.size(); ++n) artillery_total_[n] += f[n];
    }
    total_ = Field(g);
    weighted_[0] = Field(g);
    weighted_[1] = Field(g);

    const int tiles = std::clamp(options_.tiles, 1, g.ny);
    for (int t = 0; t < tiles; ++t) {
        bands_.emplace_back(static_cast<int>(static_cast<long>(g.ny) * t / tiles),
                            static_cast<int>(static_cast<long>(g.ny) * (t + 1) / tiles));
        scratch_.push_back(std::make_unique<TileScratch>());
    }
    executor_ = std::make_unique<TileExecutor>(tiles);
    refresh_summaries();
}

Simulation::~Simulation() = default;

const UnitState& Simulation::unit(std::size_t k) const { return units_.at(k)->state; }
const CellBox& Simulation::window(std::size_t k) const { return units_.at(k)->window; }
double Simulation::strength(std::size_t k) const { return units_.at(k)->strength; }

UnitOutcome Simulation::outcome(std::size_t k) const {
    const Unit& u = *units_.at(k);
    UnitOutcome o;
    o.id = u.state.id;
    o.side = u.state.side;
    o.label = u.state.label;
    o.initial_strength = u.state.initial_strength;
    o.final_strength = u.strength;
    o.closein_casualties = u.closein;
    o.ranged_casualties = u.ranged;
    o.dispersed = u.dispersed;
    o.clamped_mass = u.clamped;
    o.status = u.state.status;
    o.status_time = u.state.command.status_time;
    o.morale = u.state.morale;
    return o;
}

Field Simulation::side_density(Side s) const {
    Field out(scenario_.grid());
    for (const auto& u : units_) {
        if (u->state.side != s) continue;
        for (std::size_t n = 0; n < out.size(); ++n) out[n] += u->state.density[n];
    }
    return out;
}

void Simulation::record_event(int unit, std::string kind, std::string detail) {
    events_.push_back(RunEvent{time_, unit, std::move(kind), std::move(detail)});
}

void Simulation::refresh_summaries() {
    summaries_.resize(units_.size());
    for (std::size_t k = 0; k < units_.size(); ++k) {
        const Unit& u = *units_[k];
        UnitSummary& s = summaries_[k];
        s.id = u.state.id;
        s.side = u.state.side;
        s.strength = u.strength;
        if (u.mass > 0.0) s.centroid = {u.mass_x / u.mass, u.mass_y / u.mass};
        s.mean_speed = u.mean_speed;
        s.bearing = u.state.bearing();
        s.destroyed = !u.state.alive() || u.strength < kDestroyedStrength;
        s.retreating = u.state.status == UnitStatus::Retreating;
    }
}

void Simulation::command_phase() {
    const CommandParams& cp = scenario_.params.command;
    const CombatParams& combat = scenario_.params.combat;
    const Grid& g = scenario_.grid();

    // Morale and breakpoints all see the same frozen summaries.
    const std::vector<UnitSummary> frozen = summaries_;
    for (std::size_t k = 0; k < units_.size(); ++k) {
        Unit& u = *units_[k];
        if (!u.state.alive()) continue;
        const UnitStatus before = u.state.status;
        update_morale(u.state, frozen[k], frozen, time_, cp);
        if (u.state.status == before) continue;
        switch (u.state.status) {
            case UnitStatus::Destroyed: {
                // The remnant is below one person; it leaves the field as casualties.
                u.dispersed += u.strength;
                u.state.density.fill(0.0);
                u.strength = 0.0;
                u.mass = u.mass_x = u.mass_y = 0.0;
                u.support = {};
                record_event(u.state.id, "destroyed");
                break;
            }
            case UnitStatus::Retreating: record_event(u.state.id, "retreat"); break;
            case UnitStatus::Pressing:
                record_event(u.state.id, "press", std::to_string(u.state.command.pursuit_target));
                break;
            case UnitStatus::Active: break;
        }
    }
    refresh_summaries();

    for (std::size_t k = 0; k < units_.size(); ++k) {
        Unit& u = *units_[k];
        if (!u.state.alive()) continue;
        const std::size_t before = u.state.command.next_order;
        advance_orders(u.state, summaries_[k], summaries_, scenario_.dt, cp);
        for (std::size_t o = before; o < u.state.command.next_order; ++o) {
            record_event(u.state.id, "order", order_name(u.state.orders[o]));
        }
    }

    // Ranged targeting.
    assignments_.clear();
    for (auto& u : units_) u->coefficient = 0.0;
    if (scenario_.ranged_enabled) {
        const TerrainMap& map = *scenario_.terrain;
        auto elevation = [&](Vec2 p) { return scenario_.terrain_effects ? sample_elevation(map, p) : 0.0; };
        std::vector<Shooter> shooters;
        for (std::size_t k = 0; k < units_.size(); ++k) {
            const Unit& u = *units_[k];
            const UnitSummary& s = summaries_[k];
            if (s.destroyed || u.state.status == UnitStatus::Retreating) continue;
            shooters.push_back(Shooter{s.id, s.side, s.centroid, elevation(s.centroid), s.bearing, s.strength,
                                       s.mean_speed, false});
        }
        for (const ArtilleryUnit& a : scenario_.artillery) {
            shooters.push_back(Shooter{a.id, a.side, a.position, elevation(a.position), a.bearing,
                                       static_cast<double>(a.guns), 0.0, true});
        }
        for (const Shooter& sh : shooters) {
            const TargetAssignment ta = select_target(sh, summaries_, combat);
            assignments_.push_back(ta);
            if (!ta.defender) continue;
            for (std::size_t k = 0; k < units_.size(); ++k) {
                const UnitSummary& d = summaries_[k];
                if (d.id != *ta.defender) continue;
                const Target target{d.id, d.centroid, elevation(d.centroid), d.bearing};
                units_[k]->coefficient += ranged_attack(sh, target, combat).coefficient;
                break;
            }
        }
    }

    for (auto& u : units_) {
        u->window = u->support.empty() ? CellBox{} : u->support.dilated(options_.window_margin).clipped(g);
    }
}

void Simulation::build_totals(const std::vector<const Field*>& rho) {
    const Grid& g = scenario_.grid();
    const double k = scenario_.params.combat.closein_k;
    executor_->run([&](int t) {
        const auto [r0, r1] = bands_[t];
        for (int j = r0; j < r1; ++j) {
            std::copy_n(artillery_total_.row(j), g.nx, total_.row(j));
            std::fill_n(weighted_[0].row(j), g.nx, 0.0);
            std::fill_n(weighted_[1].row(j), g.nx, 0.0);
        }
        for (std::size_t n = 0; n < units_.size(); ++n) {
            const Unit& u = *units_[n];
            const CellBox b = u.window.rows(r0, r1);
            if (b.empty()) continue;
            Field& w = weighted_[side_index(u.state.side)];
            for (int j = b.j0; j < b.j1; ++j) {
                const double* src = rho[n]->row(j);
                double* tot = total_.row(j);
                double* wr = w.row(j);
                for (int i = b.i0; i < b.i1; ++i) {
                    tot[i] += src[i];
                    wr[i] += k * src[i];
                }
            }
        }
    });
}

void Simulation::update_region(Unit& u, std::size_t, const CellBox& B, Stage stage, TileScratch& s) {
    const Grid& g = scenario_.grid();
    const TerrainMap& map = *scenario_.terrain;
    const ModelParams& mp = scenario_.params;
    const kernels::KernelTable& kt = *kernels_;
    const CellBox& W = u.window;
    const bool predict = stage == Stage::Predict;
    const Field& rsrc = predict ? u.state.density : u.rho_star;
    const Field& xsrc = predict ? u.state.xi_x : u.xx_star;
    const Field& ysrc = predict ? u.state.xi_y : u.xy_star;
    const double dt = predict ? 0.5 * scenario_.dt : scenario_.dt;
    const int w = B.width();
    const int h = B.height();
    const double inv_ds = 1.0 / g.ds;

    // Stage inputs with two ghost cells. Outside the window the density is
    // zero and the identity is frozen at its current value; off the map the
    // density is the inflow floor and the identity the local coordinates.
    s.rho.resize(w, h);
    s.xx.resize(w, h);
    s.xy.resize(w, h);
    for (int jj = -Block::kGhost; jj < h + Block::kGhost; ++jj) {
        const int j = B.j0 + jj;
        for (int ii = -Block::kGhost; ii < w + Block::kGhost; ++ii) {
            const int i = B.i0 + ii;
            if (!g.contains(i, j)) {
                const Vec2 c = g.center(i, j);
                s.rho.at(ii, jj) = mp.inflow_density;
                s.xx.at(ii, jj) = c.x;
                s.xy.at(ii, jj) = c.y;
            } else if (i >= W.i0 && i < W.i1 && j >= W.j0 && j < W.j1) {
                s.rho.at(ii, jj) = rsrc(i, j);
                s.xx.at(ii, jj) = xsrc(i, j);
                s.xy.at(ii, jj) = ysrc(i, j);
            } else {
                s.rho.at(ii, jj) = 0.0;
                s.xx.at(ii, jj) = u.state.xi_x(i, j);
                s.xy.at(ii, jj) = u.state.xi_y(i, j);
            }
        }
    }

    // Directed velocity on the region plus a one-cell ring.
    const int vw = w + 2;
    const std::size_t vn = static_cast<std::size_t>(vw) * (h + 2);
    s.vx.assign(vn, 0.0);
    s.vy.assign(vn, 0.0);
    s.crowd.resize(vw);
    const GoalTransform& goal = u.state.goal;
    const double ct = std::cos(goal.theta);
    const double st = std::sin(goal.theta);
    for (int jj = -1; jj <= h; ++jj) {
        const int j = B.j0 + jj;
        if (j < 0 || j >= g.ny) continue;
        const int ia = std::max(B.i0 - 1, 0);
        const int ib = std::min(B.i1 + 1, g.nx);
        kt.density_factor(total_.row(j) + ia, mp.max_density, s.crowd.data(), static_cast<std::size_t>(ib - ia));
        const double* gx = slope_.dx.row(j);
        const double* gy = slope_.dy.row(j);
        const double* ov = map.overlay.row(j);
        for (int i = ia; i < ib; ++i) {
            const int ii = i - B.i0;
            const Vec2 v = directed_velocity(g.center(i, j), {s.xx.at(ii, jj), s.xy.at(ii, jj)}, s.crowd[i - ia],
                                             {gx[i], gy[i]}, ov[i], goal, kin_, ct, st);
            const std::size_t n = static_cast<std::size_t>(jj + 1) * vw + (ii + 1);
            s.vx[n] = v.x * taper_.x[i];
            s.vy[n] = v.y * taper_.y[j];
            const double speed = std::hypot(s.vx[n], s.vy[n]);
            if (speed > s.vmax) {
                s.vmax = speed;
                s.vi = i;
                s.vj = j;
            }
        }
    }
    auto vat = [&](const std::vector<double>& f, int ii, int jj) {
        return f[static_cast<std::size_t>(jj + 1) * vw + (ii + 1)];
    };

    // Face-normal velocities; faces on the map edge carry nothing.
    const std::size_t nfx = static_cast<std::size_t>(w) + 1;
    s.face_u.resize(static_cast<std::size_t>(h) * nfx);
    s.face_v.resize(static_cast<std::size_t>(h + 1) * w);
    for (int r = 0; r < h; ++r) {
        for (int f = 0; f <= w; ++f) {
            const int i = B.i0 + f;
            s.face_u[r * nfx + f] = (i <= 0 || i >= g.nx) ? 0.0 : 0.5 * (vat(s.vx, f - 1, r) + vat(s.vx, f, r));
        }
    }
    for (int f = 0; f <= h; ++f) {
        const int j = B.j0 + f;
        for (int ii = 0; ii < w; ++ii) {
            s.face_v[static_cast<std::size_t>(f) * w + ii] =
                (j <= 0 || j >= g.ny) ? 0.0 : 0.5 * (vat(s.vy, ii, f - 1) + vat(s.vy, ii, f));
        }
    }

    const std::size_t cells = static_cast<std::size_t>(w) * h;
    s.rate_rho.resize(cells);
    s.rate_xx.resize(cells);
    s.rate_xy.resize(cells);
    s.ux.resize(cells);
    s.uy.resize(cells);
    conservative_rate(kt, s.rho, s.face_u.data(), s.face_v.data(), inv_ds, s.rate_rho.data(), s.transport);

    // Total velocity for the identity; differs from V only with diffusion.
    const double D = mp.diffusion;
    for (int r = 0; r < h; ++r) {
        for (int ii = 0; ii < w; ++ii) {
            const std::size_t n = static_cast<std::size_t>(r) * w + ii;
            double ux = vat(s.vx, ii, r);
            double uy = vat(s.vy, ii, r);
            if (D > 0.0) {
                const int i = B.i0 + ii;
                const int j = B.j0 + r;
                const double c = s.rho.at(ii, r);
                auto nb = [&](int di, int dj) {
                    return g.contains(i + di, j + dj) ? s.rho.at(ii + di, r + dj) : c;
                };
                const double lap = nb(1, 0) + nb(-1, 0) + nb(0, 1) + nb(0, -1) - 4.0 * c;
                s.rate_rho[n] += D * lap * inv_ds * inv_ds;
                if (c > 1e-12) {
                    Vec2 drift{(nb(1, 0) - nb(-1, 0)) * 0.5 * inv_ds, (nb(0, 1) - nb(0, -1)) * 0.5 * inv_ds};
                    drift = drift * (D / c);
                    // keep the diffusive drift inside the advective stability bound
                    const double m = norm(drift);
                    if (m > mp.max_speed) drift = drift * (mp.max_speed / m);
                    ux -= drift.x;
                    uy -= drift.y;
                }
            }
            s.ux[n] = ux;
            s.uy[n] = uy;
        }
    }
    advective_rate(kt, s.xx, s.ux.data(), s.uy.data(), inv_ds, s.rate_xx.data(), s.transport);
    advective_rate(kt, s.xy, s.ux.data(), s.uy.data(), inv_ds, s.rate_xy.data(), s.transport);

    // Combat sinks at the stage state, then the update.
    const CombatParams& cp = mp.combat;
    const Field& enemy = weighted_[side_index(enemy_of(u.state.side))];
    s.closein.resize(w);
    Field& rdst = predict ? u.rho_star : u.state.density;
    Field& xdst = predict ? u.xx_star : u.state.xi_x;
    Field& ydst = predict ? u.xy_star : u.state.xi_y;
    const double coeff = u.coefficient;
    const double floor = predict ? 0.0 : mp.support_floor * mp.max_density;
    for (int r = 0; r < h; ++r) {
        const int j = B.j0 + r;
        const double* rho = s.rho.ptr(0, r);
        if (scenario_.closein_enabled) {
            kt.closein_rate(rho, enemy.row(j) + B.i0, cp.closein_floor * cp.max_density, s.closein.data(),
                            static_cast<std::size_t>(w));
        } else {
            std::fill(s.closein.begin(), s.closein.end(), 0.0);
        }
        const double* base_r = u.state.density.row(j);
        const double* base_x = u.state.xi_x.row(j);
        const double* base_y = u.state.xi_y.row(j);
        double* dr = rdst.row(j);
        double* dx = xdst.row(j);
        double* dy = ydst.row(j);
        double mass = 0.0, mx = 0.0, speed = 0.0, closein = 0.0, ranged = 0.0, clamped = 0.0;
        int lo = g.nx, hi = 0;
        for (int ii = 0; ii < w; ++ii) {
            const int i = B.i0 + ii;
            const std::size_t n = static_cast<std::size_t>(r) * w + ii;
            const double shot = coeff * rho[ii];
            double next = base_r[i] + dt * (s.rate_rho[n] - s.closein[ii] - shot);
            if (next < floor) {
                clamped -= next;
                next = 0.0;
            }
            const double nx = base_x[i] + dt * s.rate_xx[n];
            const double ny = base_y[i] + dt * s.rate_xy[n];
            if (!std::isfinite(next) || !std::isfinite(nx) || !std::isfinite(ny)) {
                if (!s.bad) {
                    s.bad = true;
                    s.bad_unit = u.state.id;
                    s.bad_i = i;
                    s.bad_j = j;
                }
            }
            dr[i] = next;
            dx[i] = nx;
            dy[i] = ny;
            if (!predict) {
                mass += next;
                mx += next * (g.origin.x + (i + 0.5) * g.ds);
                speed += next * std::hypot(s.ux[n], s.uy[n]);
                closein += s.closein[ii];
                ranged += shot;
                if (next > 0.0) {
                    lo = std::min(lo, i);
                    hi = i + 1;
                }
            }
        }
        if (!predict) {
            u.row_mass[j] = mass;
            u.row_mx[j] = mx;
            u.row_speed[j] = speed;
            u.row_closein[j] = closein;
            u.row_ranged[j] = ranged;
            u.row_clamped[j] = clamped;
            u.row_lo[j] = lo;
            u.row_hi[j] = hi;
        }
    }
}

void Simulation::field_stage(Stage stage) {
    for (auto& s : scratch_) {
        s->vmax = 0.0;
        s->bad = false;
    }
    executor_->run([&](int t) {
        const auto [r0, r1] = bands_[t];
        TileScratch& s = *scratch_[t];
        for (std::size_t k = 0; k < units_.size(); ++k) {
            Unit& u = *units_[k];
            const CellBox b = u.window.rows(r0, r1);
            if (!b.empty()) update_region(u, k, b, stage, s);
        }
    });
    const Grid& g = scenario_.grid();
    for (const auto& s : scratch_) {
        if (s->vmax * scenario_.dt / g.ds >= 1.0) {
            std::ostringstream msg;
            msg << "CFL limit exceeded at t = " << time_ << " s: speed " << s->vmax << " m/s at cell (" << s->vi
                << ", " << s->vj << ")";
            throw CflError(msg.str(), s->vmax, s->vi, s->vj);
        }
    }
    for (const auto& s : scratch_) {
        if (s->bad) {
            std::ostringstream msg;
            msg << "non-finite value in unit " << s->bad_unit << " at cell (" << s->bad_i << ", " << s->bad_j
                << "), t = " << time_ << " s";
            throw NonFiniteError(msg.str(), s->bad_unit, s->bad_i, s->bad_j);
        }
    }
}

void Simulation::reduce_stage(Stage) {
    const Grid& g = scenario_.grid();
    const double area = g.cell_area();
    const double dt = scenario_.dt;
    for (auto& up : units_) {
        Unit& u = *up;
        const CellBox& W = u.window;
        if (W.empty()) continue;
        double mass = 0.0, mx = 0.0, my = 0.0, speed = 0.0, closein = 0.0, ranged = 0.0, clamped = 0.0;
        CellBox sup{g.nx, 0, g.ny, 0};
        for (int j = W.j0; j < W.j1; ++j) {
            mass += u.row_mass[j];
            mx += u.row_mx[j];
            my += u.row_mass[j] * (g.origin.y + (j + 0.5) * g.ds);
            speed += u.row_speed[j];
            closein += u.row_closein[j];
            ranged += u.row_ranged[j];
            clamped += u.row_clamped[j];
            if (u.row_hi[j] > u.row_lo[j]) {
                sup.i0 = std::min(sup.i0, u.row_lo[j]);
                sup.i1 = std::max(sup.i1, u.row_hi[j]);
                sup.j0 = std::min(sup.j0, j);
                sup.j1 = std::max(sup.j1, j + 1);
            }
        }
        u.mass = mass;
        u.mass_x = mx;
        u.mass_y = my;
        u.strength = mass * area;
        u.mean_speed = mass > 0.0 ? speed / mass : 0.0;
        u.closein += dt * area * closein;
        u.ranged += dt * area * ranged;
        u.clamped += area * clamped;
        u.support = sup.empty() ? CellBox{} : sup;
    }
}

void Simulation::step() {
    command_phase();
    std::vector<const Field*> rho(units_.size());
    for (std::size_t k = 0; k < units_.size(); ++k) rho[k] = &units_[k]->state.density;
    build_totals(rho);
    field_stage(Stage::Predict);
    for (std::size_t k = 0; k < units_.size(); ++k) rho[k] = &units_[k]->rho_star;
    build_totals(rho);
    field_stage(Stage::Correct);
    reduce_stage(Stage::Correct);
    ++step_;
    time_ = step_ * scenario_.dt;
    refresh_summaries();
}

double RunResult::side_casualties(Side s) const {
    double c = 0.0;
    for (const auto& u : units) {
        if (u.side == s) c += u.casualties();
    }
    return c;
}

double RunResult::side_initial(Side s) const {
    double c = 0.0;
    for (const auto& u : units) {
        if (u.side == s) c += u.initial_strength;
    }
    return c;
}

double RunResult::side_final(Side s) const {
    double c = 0.0;
    for (const auto& u : units) {
        if (u.side == s) c += u.final_strength;
    }
    return c;
}

int RunResult::side_retreating(Side s) const {
    int n = 0;
    for (const auto& u : units) {
        if (u.side == s && u.status == UnitStatus::Retreating) ++n;
    }
    return n;
}

int RunResult::side_units(Side s) const {
    int n = 0;
    for (const auto& u : units) {
        if (u.side == s) ++n;
    }
    return n;
}

RunResult run(const Scenario& scenario, const SolverOptions& options, const SnapshotCallback& on_snapshot) {
    Simulation sim(scenario, options);
    RunResult r;
    r.scenario = scenario.name;
    r.dt = scenario.dt;
    auto record = [&] {
        r.times.push_back(sim.time());
        std::vector<double> strength(sim.unit_count()), casualties(sim.unit_count());
        for (std::size_t k = 0; k < sim.unit_count(); ++k) {
            const UnitOutcome o = sim.outcome(k);
            strength[k] = o.final_strength;
            casualties[k] = o.casualties();
        }
        r.strength.push_back(std::move(strength));
        r.casualties.push_back(std::move(casualties));
    };
    record();
    if (on_snapshot) on_snapshot(sim);
    const long steps = scenario.steps();
    const long every = scenario.snapshot_every > 0.0
                           ? std::max(1L, std::lround(scenario.snapshot_every / scenario.dt))
                           : 0L;
    for (long s = 1; s <= steps; ++s) {
        sim.step();
        record();
        if (on_snapshot && ((every > 0 && s % every == 0) || s == steps)) on_snapshot(sim);
    }
    for (std::size_t k = 0; k < sim.unit_count(); ++k) r.units.push_back(sim.outcome(k));
    r.events = sim.events();
    return r;
}

}  // namespace bfm
