import os
import sys

import click
from joblib import cpu_count

from fluxlab import logger
from fluxlab.common.artifacts import ArtifactWriter
from fluxlab.common.config import COMMANDS, get_study_module, load_config
from fluxlab.common.console_util import echo_error, timed
from fluxlab.errors import FluxlabError

LOG_LEVELS = ('debug', 'info', 'warn', 'error', 'disabled')


def resolve_jobs(jobs=None):
    """--jobs, then $FLUXLAB_JOBS, then the number of logical processors."""
    if jobs is None:
        env = os.getenv('FLUXLAB_JOBS')
        jobs = int(env) if env else cpu_count()
    return max(1, int(jobs))


def run(config, progress=False):
    """Run one validated RunConfig and return its manifest."""
    module = get_study_module(config.command)
    setup = module.build(config.parameters)
    n_jobs = resolve_jobs(config.jobs)
    writer = ArtifactWriter(config.output_dir, config.command, config.canonical())
    with timed('%s -> %s' % (config.command, config.output_dir), enabled=progress):
        module.run(setup, writer, n_jobs=n_jobs, progress=progress)
        if config.emit_svg:
            module.plot(writer)
    return writer.close()


@click.group()
@click.option('--log-dir', type=click.Path(file_okay=False), default=None,
              help='Directory for log.txt / progress files (default: $FLUXLAB_LOGDIR, else stdout only).')
@click.option('--log-level', type=click.Choice(LOG_LEVELS), default=None,
              help='Logging threshold (default: $FLUXLAB_LOG_LEVEL, else info).')
def cli(log_dir, log_level):
    """Information flux and non-Markovianity of open quantum systems (hbar = k_B = 1)."""
    logger.configure(dir=log_dir, level=log_level)


def _make_command(name):
    @click.option('--config', 'config_path', type=click.Path(dir_okay=False), default=None,
                  help='JSON config; parameters not given keep their defaults.')
    @click.option('--out', 'output_dir', type=click.Path(file_okay=False), default=None,
                  help='Artifact directory (overrides output_dir in the config).')
    @click.option('--svg/--no-svg', 'emit_svg', default=None, help='Also render SVG plots from the CSV files.')
    @click.option('--jobs', type=click.IntRange(min=1), envvar='FLUXLAB_JOBS', default=None,
                  help='Worker processes (default: $FLUXLAB_JOBS, else logical CPU count).')
    def command(config_path, output_dir, emit_svg, jobs):
        overrides = dict(output_dir=output_dir, emit_svg=emit_svg, jobs=jobs)
        config = load_config(config_path, overrides, command=name)
        manifest = run(config, progress=sys.stderr.isatty())
        for entry in manifest['artifacts']:
            logger.info('wrote %s' % os.path.join(config.output_dir, entry['name']))
    command.__doc__ = 'Run the %s study.' % name
    return cli.command(name)(command)


for _name in COMMANDS:
    _make_command(_name)


def main(args=None):
    try:
        cli.main(args=args, prog_name='fluxlab', standalone_mode=False)
    except FluxlabError as e:
        echo_error(type(e).__name__, str(e))
        return e.exit_code
    except click.exceptions.Abort:
        echo_error('Aborted', 'interrupted')
        return 1
    except click.ClickException as e:
        e.show()
        return e.exit_code
    return 0


if __name__ == '__main__':
    sys.exit(main())
