// Copyright (c) ppmctl contributors.
// SPDX-License-Identifier: Apache-2.0

#include "ppm/sim/engine.hpp"

#include <algorithm>
#include <cmath>

#include "ppm/common/errors.hpp"

namespace ppm::sim {

namespace {

constexpr int kNx = plant::PlantState::kDim; // 21

// Integrated state layout: plant, pitch, zeta_sec, rocof washout, theta_f,
// then (coordinated only) weight-filter states and the output integrators.
struct Layout {
  int pitch = kNx;     // 2 entries
  int zeta = kNx + 2;
  int rocof = kNx + 3;
  int theta = kNx + 4;
  int filter = kNx + 5;
  int n_filter = 0;
  int integ = 0; // filter + n_filter
  int total = 0;
};

Layout make_layout(bool coordinated, int n_filter) {
  Layout l;
  l.n_filter = coordinated ? n_filter : 0;
  l.integ = l.filter + l.n_filter;
  l.total = l.integ + (coordinated ? 6 : 0);
  return l;
}

void write_plant(const plant::PlantState &s, Eigen::Ref<Eigen::VectorXd> x) {
  const plant::PmsgStates *ms[2] = {&s.m1, &s.m2};
  for (int k = 0; k < 2; ++k) {
    const int o = 10 * k;
    x(o + 0) = ms[k]->i_1d;
    x(o + 1) = ms[k]->i_1q;
    x(o + 2) = ms[k]->i_2d;
    x(o + 3) = ms[k]->i_2q;
    x(o + 4) = ms[k]->v_cfd;
    x(o + 5) = ms[k]->v_cfq;
    x(o + 6) = ms[k]->i_sd;
    x(o + 7) = ms[k]->i_sq;
    x(o + 8) = ms[k]->v_dc;
    x(o + 9) = ms[k]->omega_r;
  }
  x(20) = s.omega_f;
}

plant::PlantState read_plant(const Eigen::Ref<const Eigen::VectorXd> &x,
                             double zeta, double theta) {
  plant::PlantState s = plant::PlantState::from_vector(x.head(kNx));
  s.zeta_sec = zeta;
  s.theta_f = theta;
  return s;
}

struct StepContext {
  Eigen::Matrix<double, 6, 1> y_ref;    // scripted references
  double p_l = 0.0;
  double p_m0_1 = 0.0, p_m0_2 = 0.0;    // used when aero coupling is off
  double beta_ref0_1 = 0.0, beta_ref0_2 = 0.0;
  plant::ControlInput held_duty;        // vector / open-loop duty for the step
};

const char *const kChannelNames[] = {
    "time_s",       "Q_1_pu",      "P_1_pu",      "v_DC1_pu",
    "Q_2_pu",       "P_2_pu",      "v_DC2_pu",    "Omega_1_pu",
    "Omega_2_pu",   "beta_1_deg",  "beta_2_deg",  "omega_f_pu",
    "rocof_pu_s",   "V_r1_pu",     "V_r2_pu",     "P_e_pu",
    "P_L_pu",       "P_m1_pu",     "P_m2_pu",     "Q_1ref_pu",
    "P_1ref_pu",    "v_DC1ref_pu", "Q_2ref_pu",   "P_2ref_pu",
    "v_DC2ref_pu",  "beta_11d",    "beta_11q",    "beta_s1d",
    "beta_s1q",     "beta_12d",    "beta_12q",    "beta_s2d",
    "beta_s2q",     "Omega_1ref_pu", "Omega_2ref_pu"};

class Engine {
public:
  Engine(const Scenario &sc, const ModelBundle &model,
         const ControllerBundle *ctrl)
      : sc_(sc), model_(model), ctrl_(ctrl) {
    sc_.validate();
    model_.params.validate();
    model_.droop.validate();
    model_.inertia.validate();
    coordinated_ = sc_.controller == ControllerKind::Coordinated;
    if (coordinated_ && !ctrl_)
      throw ConfigError("coordinated scenario needs a controller file");

    layout_ = make_layout(coordinated_,
                          coordinated_ ? ctrl_->w3.state_dim() : 0);
    if (coordinated_ &&
        ctrl_->k0.cols() != kNx + layout_.n_filter + 6)
      throw DimensionMismatch("controller gain does not match the model");

    curve_ = services::deload_point(model_.aero, sc_.wind_speed,
                                    model_.deload_fraction);
    init_equilibrium();
    healthy_net_ = model_.params.net;
  }

  RunResult run() {
    const long n_steps = std::lround(sc_.duration / sc_.dt);
    prepare_events(n_steps);
    init_state();
    init_recording(n_steps);

    StepContext ctx = base_ctx_;
    long next_event = 0;
    for (long k = 0; k <= n_steps; ++k) {
      const double t = static_cast<double>(k) * sc_.dt;
      while (next_event < static_cast<long>(events_.size()) &&
             events_[next_event].step == k) {
        apply_event(events_[next_event].ev, ctx);
        ++next_event;
      }
      if (sc_.controller == ControllerKind::Vector)
        step_vector_controllers(ctx);

      if (k % sc_.record_stride == 0 || k == n_steps)
        record(t, ctx);
      if (k == n_steps)
        break;
      rk4_step(t, ctx);
    }

    RunResult res;
    res.ts = std::move(ts_);
    res.log = log_;
    res.final_state = read_plant(x_.head(kNx), x_(layout_.zeta),
                                 x_(layout_.theta));
    res.final_full_state = x_;
    res.equilibrium = eq_;
    return res;
  }

private:
  struct ScheduledEvent {
    long step;
    Event ev;
  };

  void init_equilibrium() {
    const bool pitch_branch = sc_.services.pitch_deload;
    beta0_ = pitch_branch ? curve_.beta_del : 0.0;
    const double omega0 = pitch_branch ? curve_.omega_opt : curve_.omega_del;
    if (pitch_branch && !curve_.pitch_branch_ok)
      throw NoDeloadSolution("pitch deloading branch unavailable here");
    if (!pitch_branch && !curve_.speed_branch_ok)
      throw NoDeloadSolution("speed deloading branch unavailable here");

    plant::SpeedPinning pin;
    if (sc_.services.aero_coupling) {
      pin.mode = plant::SpeedPinning::Mode::AeroPower;
      const double v = sc_.wind_speed;
      const double b = beta0_;
      const services::TurbineAeroModel &aero = model_.aero;
      pin.p_m1 = [v, b, &aero](double om) {
        return aero.mech_power(v, om, b);
      };
      pin.p_m2 = pin.p_m1;
      pin.dp_m1 = [v, b, &aero](double om) {
        return aero.mech_power_domega(v, om, b);
      };
      pin.dp_m2 = pin.dp_m1;
      pin.omega_guess_1 = pin.omega_guess_2 = omega0;
    } else {
      pin.mode = plant::SpeedPinning::Mode::FixedSpeed;
      pin.omega_ref_1 = pin.omega_ref_2 = omega0;
    }
    eq_ = plant::find_equilibrium(sc_.setpoints, model_.params, pin);
    model_.params.gde.p_m_rest = eq_.p_m_rest;
    log_.equilibrium_residual = eq_.residual;

    if (coordinated_) {
      const double mismatch =
          (eq_.x.to_vector() - ctrl_->op.x.to_vector())
              .lpNorm<Eigen::Infinity>();
      if (mismatch > 1e-6)
        throw ConfigError("controller was synthesized at a different "
                          "operating point (|dx| = " +
                          std::to_string(mismatch) + ")");
    }

    base_ctx_.y_ref << sc_.setpoints.q_ref_1, sc_.setpoints.p_ref_1,
        sc_.setpoints.v_dc_ref_1, sc_.setpoints.q_ref_2,
        sc_.setpoints.p_ref_2, sc_.setpoints.v_dc_ref_2;
    base_ctx_.p_l = model_.params.gde.p_l0;
    base_ctx_.p_m0_1 = eq_.w.p_m1;
    base_ctx_.p_m0_2 = eq_.w.p_m2;
    base_ctx_.beta_ref0_1 = base_ctx_.beta_ref0_2 = beta0_;
    base_ctx_.held_duty = eq_.u;

    y_op_ = plant::outputs(eq_.x, model_.params).to_vector();
    x_op_ = eq_.x.to_vector();
    u_op_ = eq_.u.to_vector();

    if (sc_.controller == ControllerKind::Vector) {
      gsc1_ = vector_control::GscController(model_.vector_control,
                                            model_.params.m1,
                                            model_.params.base, eq_.x.m1,
                                            eq_.u.b_11d, eq_.u.b_11q);
      gsc2_ = vector_control::GscController(model_.vector_control,
                                            model_.params.m2,
                                            model_.params.base, eq_.x.m2,
                                            eq_.u.b_12d, eq_.u.b_12q);
      msc1_ = vector_control::MscController(model_.vector_control,
                                            model_.params.m1,
                                            model_.params.base, eq_.x.m1,
                                            eq_.u.b_s1d, eq_.u.b_s1q);
      msc2_ = vector_control::MscController(model_.vector_control,
                                            model_.params.m2,
                                            model_.params.base, eq_.x.m2,
                                            eq_.u.b_s2d, eq_.u.b_s2q);
    }
  }

  void prepare_events(long n_steps) {
    events_.clear();
    for (const Event &e : sc_.events) {
      const long k =
          std::min(n_steps, std::max<long>(0, std::lround(e.t / sc_.dt)));
      events_.push_back({k, e});
      if (e.kind == EventKind::ShortCircuit) {
        Event restore = e;
        restore.kind = EventKind::RestoreLoad; // reused as "clear fault"
        restore.t = e.t_clear;
        restore.delta_pu = 0.0;
        restore.value = -1.0; // marker: fault clearing, not load restore
        events_.push_back(
            {std::min(n_steps, std::lround(e.t_clear / sc_.dt)), restore});
      }
    }
    std::stable_sort(events_.begin(), events_.end(),
                     [](const ScheduledEvent &a, const ScheduledEvent &b) {
                       return a.step < b.step;
                     });
  }

  void apply_event(const Event &e, StepContext &ctx) {
    switch (e.kind) {
    case EventKind::ReferenceStep:
      ctx.y_ref(static_cast<int>(e.channel)) = e.value;
      break;
    case EventKind::LoadStep:
      ctx.p_l += e.delta_pu;
      break;
    case EventKind::ShortCircuit:
      model_.params.net =
          plant::apply_short_circuit(healthy_net_, e.line, e.fraction);
      break;
    case EventKind::RestoreLoad:
      if (e.value < 0.0)
        model_.params.net = healthy_net_; // fault clearing
      else
        ctx.p_l = model_.params.gde.p_l0;
      break;
    }
  }

  void init_state() {
    x_ = Eigen::VectorXd::Zero(layout_.total);
    write_plant(eq_.x, x_.head(kNx));
    x_(layout_.pitch + 0) = beta0_;
    x_(layout_.pitch + 1) = beta0_;
    x_(layout_.zeta) = 0.0;
    x_(layout_.rocof) = 1.0; // washout settled at nominal frequency
    x_(layout_.theta) = 0.0;
    k1_.resize(layout_.total);
    k2_.resize(layout_.total);
    k3_.resize(layout_.total);
    k4_.resize(layout_.total);
    xt_.resize(layout_.total);
    ctrl_state_.resize(coordinated_ ? kNx + layout_.n_filter + 6 : 0);
  }

  void init_recording(long n_steps) {
    ts_.names.assign(std::begin(kChannelNames), std::end(kChannelNames));
    ts_.names.erase(ts_.names.begin()); // time vector kept separately
    ts_.stride = sc_.record_stride;
    const size_t samples =
        static_cast<size_t>(n_steps / sc_.record_stride + 2);
    ts_.time.reserve(samples);
    ts_.columns.assign(ts_.names.size(), {});
    for (auto &c : ts_.columns)
      c.reserve(samples);
  }

  // Effective references with the frequency services applied.
  void service_offsets(double omega_f, double rocof_state,
                       const StepContext &ctx,
                       Eigen::Matrix<double, 6, 1> &y_ref, double &beta_ref_1,
                       double &beta_ref_2, double &omega_ref) const {
    const double df = omega_f - 1.0;
    y_ref = ctx.y_ref;
    beta_ref_1 = ctx.beta_ref0_1;
    beta_ref_2 = ctx.beta_ref0_2;
    omega_ref = sc_.services.pitch_deload ? curve_.omega_opt
                                          : curve_.omega_del;
    double dp = 0.0;
    if (sc_.services.droop)
      dp += services::droop_power(df, model_.droop);
    if (sc_.services.inertia) {
      const double rocof = (omega_f - rocof_state) / model_.inertia.t_f;
      dp += services::inertia_power(rocof, model_.inertia);
    }
    if (dp != 0.0) {
      y_ref(1) += dp;
      y_ref(4) += dp;
    }
    if (sc_.services.droop) {
      if (sc_.services.pitch_deload)
        beta_ref_1 = beta_ref_2 =
            services::pitch_reference(df, curve_, model_.droop.r);
      else
        omega_ref = services::speed_reference(df, curve_, model_.droop.r);
    }
  }

  plant::ControlInput control_at(const Eigen::Ref<const Eigen::VectorXd> &x,
                                 const StepContext &ctx, bool *saturated) {
    if (!coordinated_) {
      plant::ControlInput u = ctx.held_duty;
      if (saturated)
        *saturated = false;
      return u;
    }
    ctrl_state_.head(kNx) = x.head(kNx) - x_op_;
    ctrl_state_.segment(kNx, layout_.n_filter) =
        x.segment(layout_.filter, layout_.n_filter);
    ctrl_state_.tail(6) = x.segment(layout_.integ, 6);
    du_.noalias() = ctrl_->k0 * ctrl_state_;
    plant::ControlInput u =
        plant::ControlInput::from_vector(u_op_ + du_);
    const bool clipped = u.clamp_modulation();
    if (saturated)
      *saturated = clipped;
    return u;
  }

  void deriv(const Eigen::Ref<const Eigen::VectorXd> &x,
             const StepContext &ctx, Eigen::Ref<Eigen::VectorXd> dx,
             bool *saturated = nullptr) {
    const plant::PlantState xs =
        read_plant(x.head(kNx), x(layout_.zeta), x(layout_.theta));

    Eigen::Matrix<double, 6, 1> y_ref;
    double beta_ref_1, beta_ref_2, omega_ref;
    service_offsets(xs.omega_f, x(layout_.rocof), ctx, y_ref, beta_ref_1,
                    beta_ref_2, omega_ref);
    (void)omega_ref;

    const plant::ControlInput u = control_at(x, ctx, saturated);

    plant::DisturbanceInput w;
    if (sc_.services.aero_coupling) {
      w.p_m1 = model_.aero.mech_power(sc_.wind_speed, xs.m1.omega_r,
                                      x(layout_.pitch + 0));
      w.p_m2 = model_.aero.mech_power(sc_.wind_speed, xs.m2.omega_r,
                                      x(layout_.pitch + 1));
    } else {
      w.p_m1 = ctx.p_m0_1;
      w.p_m2 = ctx.p_m0_2;
    }
    w.p_l = ctx.p_l;

    const plant::PlantState dxs = plant::pmsg_derivatives(xs, u, w,
                                                          model_.params);
    write_plant(dxs, dx.head(kNx));

    const plant::PitchState rate = plant::pitch_dynamics(
        {x(layout_.pitch + 0), x(layout_.pitch + 1)}, beta_ref_1, beta_ref_2,
        model_.params.m1, model_.params.m2);
    dx(layout_.pitch + 0) = rate.beta_1;
    dx(layout_.pitch + 1) = rate.beta_2;
    dx(layout_.zeta) = dxs.zeta_sec;
    dx(layout_.rocof) = (xs.omega_f - x(layout_.rocof)) / model_.inertia.t_f;
    dx(layout_.theta) = dxs.theta_f;

    if (coordinated_) {
      const Eigen::VectorXd y = plant::outputs(xs, model_.params).to_vector();
      dx.segment(layout_.filter, layout_.n_filter).noalias() =
          ctrl_->w3.a_w3 * x.segment(layout_.filter, layout_.n_filter) +
          ctrl_->w3.b_w3 * (ctrl_->w3.c_q * (y - y_op_));
      dx.segment(layout_.integ, 6) = y_ref - y;
    }
  }

  void rk4_step(double t, const StepContext &ctx) {
    bool sat = false;
    deriv(x_, ctx, k1_, &sat);
    if (sat) {
      ++log_.saturation_steps;
      if (log_.first_saturation_time < 0.0)
        log_.first_saturation_time = t;
    }
    xt_ = x_ + 0.5 * sc_.dt * k1_;
    deriv(xt_, ctx, k2_);
    xt_ = x_ + 0.5 * sc_.dt * k2_;
    deriv(xt_, ctx, k3_);
    xt_ = x_ + sc_.dt * k3_;
    deriv(xt_, ctx, k4_);
    x_ += (sc_.dt / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_);
    for (int i = 0; i < 2; ++i) {
      const plant::PmsgParams &mp = i == 0 ? model_.params.m1
                                           : model_.params.m2;
      x_(layout_.pitch + i) =
          std::clamp(x_(layout_.pitch + i), mp.beta_min, mp.beta_max);
    }
  }

  void step_vector_controllers(StepContext &ctx) {
    const plant::PlantState xs =
        read_plant(x_.head(kNx), x_(layout_.zeta), x_(layout_.theta));
    Eigen::Matrix<double, 6, 1> y_ref;
    double br1, br2, omr;
    service_offsets(xs.omega_f, x_(layout_.rocof), ctx, y_ref, br1, br2, omr);
    (void)br1;
    (void)br2;
    (void)omr;

    const auto [p1, p2] = plant::active_power(xs, model_.params);
    const auto g1 = gsc1_.step({xs.m1.i_1d, xs.m1.i_1q, xs.m1.v_cfd,
                                xs.m1.v_cfq, xs.m1.v_dc, xs.omega_f},
                               y_ref(2), y_ref(0), sc_.dt);
    const auto g2 = gsc2_.step({xs.m2.i_1d, xs.m2.i_1q, xs.m2.v_cfd,
                                xs.m2.v_cfq, xs.m2.v_dc, xs.omega_f},
                               y_ref(5), y_ref(3), sc_.dt);
    const auto m1 = msc1_.step({xs.m1.i_sd, xs.m1.i_sq, xs.m1.v_dc,
                                xs.m1.omega_r},
                               y_ref(1), p1, sc_.dt);
    const auto m2 = msc2_.step({xs.m2.i_sd, xs.m2.i_sq, xs.m2.v_dc,
                                xs.m2.omega_r},
                               y_ref(4), p2, sc_.dt);
    ctx.held_duty = {g1.first, g1.second, m1.first, m1.second,
                     g2.first,  g2.second, m2.first, m2.second};
  }

  void record(double t, const StepContext &ctx) {
    const plant::PlantState xs =
        read_plant(x_.head(kNx), x_(layout_.zeta), x_(layout_.theta));
    const plant::OutputVector y = plant::outputs(xs, model_.params);

    Eigen::Matrix<double, 6, 1> y_ref;
    double br1, br2, omega_ref;
    service_offsets(xs.omega_f, x_(layout_.rocof), ctx, y_ref, br1, br2,
                    omega_ref);

    const plant::ControlInput u = control_at(x_, ctx, nullptr);
    const double rocof = (xs.omega_f - x_(layout_.rocof)) / model_.inertia.t_f;

    const auto [v1d, v1q] = model_.params.net.bus_voltage_dq(
        1, xs.m1.i_2d, xs.m1.i_2q, xs.m2.i_2d, xs.m2.i_2q);
    const auto [v2d, v2q] = model_.params.net.bus_voltage_dq(
        2, xs.m1.i_2d, xs.m1.i_2q, xs.m2.i_2d, xs.m2.i_2q);

    double w_pm1 = ctx.p_m0_1, w_pm2 = ctx.p_m0_2;
    if (sc_.services.aero_coupling) {
      w_pm1 = model_.aero.mech_power(sc_.wind_speed, xs.m1.omega_r,
                                     x_(layout_.pitch + 0));
      w_pm2 = model_.aero.mech_power(sc_.wind_speed, xs.m2.omega_r,
                                     x_(layout_.pitch + 1));
    }

    ts_.time.push_back(t);
    const double vals[] = {
        y.q_1, y.p_1, y.v_dc1, y.q_2, y.p_2, y.v_dc2,
        xs.m1.omega_r, xs.m2.omega_r,
        x_(layout_.pitch + 0), x_(layout_.pitch + 1),
        xs.omega_f, rocof,
        std::hypot(v1d, v1q), std::hypot(v2d, v2q),
        plant::injected_power(xs, model_.params.net),
        ctx.p_l, w_pm1, w_pm2,
        y_ref(0), y_ref(1), y_ref(2), y_ref(3), y_ref(4), y_ref(5),
        u.b_11d, u.b_11q, u.b_s1d, u.b_s1q,
        u.b_12d, u.b_12q, u.b_s2d, u.b_s2q,
        omega_ref, omega_ref};
    for (size_t i = 0; i < ts_.columns.size(); ++i)
      ts_.columns[i].push_back(vals[i]);
  }

  Scenario sc_;
  ModelBundle model_;
  const ControllerBundle *ctrl_;
  bool coordinated_ = false;
  Layout layout_;
  services::DeloadPoint curve_;
  plant::Equilibrium eq_;
  plant::NetworkCoupling healthy_net_;
  double beta0_ = 0.0;

  StepContext base_ctx_;
  std::vector<ScheduledEvent> events_;

  Eigen::VectorXd x_, k1_, k2_, k3_, k4_, xt_;
  Eigen::VectorXd x_op_, u_op_, y_op_, ctrl_state_;
  Eigen::Matrix<double, 8, 1> du_;

  vector_control::GscController gsc1_, gsc2_;
  vector_control::MscController msc1_, msc2_;

  TimeSeries ts_;
  RunLog log_;
};

} // namespace

RunResult run(const Scenario &scenario, const ModelBundle &model,
              const ControllerBundle *coordinated) {
  Engine engine(scenario, model, coordinated);
  return engine.run();
}

} // namespace ppm::sim
