"""results store

Revision ID: 3f0c9a2e71b4
Revises: 
Create Date: 2026-10-17 12:00:00.000000

"""
from alembic import op
import sqlalchemy as sa


# revision identifiers, used by Alembic.
revision = '3f0c9a2e71b4'
down_revision = None
branch_labels = None
depends_on = None


def upgrade() -> None:
    op.create_table('runs',
    sa.Column('id', sa.Integer(), autoincrement=True, nullable=False),
    sa.Column('scenario', sa.String(length=16), nullable=False),
    sa.Column('levels', sa.Integer(), nullable=False),
    sa.Column('dt', sa.Float(), nullable=False),
    sa.Column('t_final', sa.Float(), nullable=False),
    sa.Column('convection_on', sa.Boolean(), nullable=False),
    sa.Column('created_time', sa.DateTime(), nullable=False),
    sa.PrimaryKeyConstraint('id')
    )
    op.create_index(op.f('ix_runs_scenario'), 'runs', ['scenario'], unique=False)
    op.create_table('level_results',
    sa.Column('id', sa.Integer(), autoincrement=True, nullable=False),
    sa.Column('run_id', sa.Integer(), nullable=False),
    sa.Column('level', sa.Integer(), nullable=False),
    sa.Column('h_f', sa.Float(), nullable=False),
    sa.Column('h_p', sa.Float(), nullable=False),
    sa.Column('h_tf', sa.Float(), nullable=False),
    sa.Column('h_tp', sa.Float(), nullable=False),
    sa.Column('field', sa.String(length=16), nullable=False),
    sa.Column('error', sa.Float(), nullable=False),
    sa.Column('rate', sa.Float(), nullable=True),
    sa.Column('iterations', sa.Float(), nullable=False),
    sa.ForeignKeyConstraint(['run_id'], ['runs.id'], ),
    sa.PrimaryKeyConstraint('id')
    )
    op.create_index(op.f('ix_level_results_run_id'), 'level_results', ['run_id'], unique=False)


def downgrade() -> None:
    op.drop_index(op.f('ix_level_results_run_id'), table_name='level_results')
    op.drop_table('level_results')
    op.drop_index(op.f('ix_runs_scenario'), table_name='runs')
    op.drop_table('runs')
